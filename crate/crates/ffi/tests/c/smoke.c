#include <stdio.h>
#include <string.h>
#include "gcgsim.h"

int main(void) {
    GcgGrammar *g = NULL;
    if (gcg_grammar_new("english-GWP", &g) != GCG_STATUS_OK) return 1;
    GcgParse *p = NULL;
    if (gcg_parse(g, "NP (S\\NP)/NP NP", &p) != GCG_STATUS_OK) return 2;
    if (!gcg_parse_success(p) || gcg_parse_total_wml(p) != 16) return 3;
    uint32_t rec[8];
    size_t len = 0;
    if (gcg_parse_wml_record(p, rec, 8, &len) != GCG_STATUS_OK || len != 5 || rec[2] != 6) return 4;
    char *lf = NULL;
    gcg_parse_lf(p, &lf);
    if (lf == NULL || strcmp(lf, "w1(w0, w2)") != 0) return 5;
    gcg_string_free(lf);
    gcg_parse_free(p);
    gcg_grammar_free(g);

    GcgGrammar *bad = NULL;
    if (gcg_grammar_new("klingon", &bad) != GCG_STATUS_INVALID_ARGUMENT) return 6;
    char *msg = gcg_last_error_message();
    if (msg == NULL) return 7;
    gcg_string_free(msg);
    puts("ok");
    return 0;
}

//! Categories, the combinatory rule schemata, and logical forms.

pub mod category;
pub mod lf;
pub mod rules;

pub use category::{format_category_string, parse_category_string, Arg, Atom, Category, Dir, Role};
pub use lf::LogicalForm;
pub use rules::{all_permutations, permute_once, permute_sign, sign_permutations, try_apply, try_compose, RuleSchema, Sign};

pub mod equiv;
pub mod error;
pub mod exact;
pub mod expr;
pub mod hopf;
pub mod json;
pub mod maps;
pub mod matrix;
pub mod reps;
pub mod residual;
pub mod verify;

pub use error::{Error, Result};
pub use exact::{Elementary, HPoly, Rational, WSeries};
pub use expr::{
    antipode_transform, parse_expression, Dialect, Expr, Generator, GeneratorImages, ParsedExpr,
};
pub use json::{matrix_from_json, matrix_to_json};
pub use maps::{BuiltinMap, ForwardSolution, InverseSolution, MapSpec};
pub use matrix::{flip_perm, PolyMatrix, TensorShape};
pub use reps::{classical_irrep, jordanian_irrep, ClassicalIrrep, JordanianIrrep};
pub use residual::Residual;
pub use verify::{
    run_suite, CheckReport, CheckResult, Sabotage, SpinPlan, Suite, SuiteConfig, Verdict,
};

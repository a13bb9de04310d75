//! Test bodies with matching section or projection functionals, and the
//! checks that confirm them.

mod construct;
mod moments;
mod verify;

pub use construct::{
    build_bonnesen_pair, build_klee_body, chord_window_holds, BonnesenConfig, BonnesenPair, KleeConfig, PsiChoice,
    INNER_WINDOW, OUTER_WINDOW, WINDOW_PROBE,
};
pub use moments::{
    moment_residuals, reduced_count, solve_moments, MomentIndex, MomentSolution, MomentSystem, FULL_TOL, REDUCED_TOL,
    WINDOW,
};
pub use verify::{
    relative_difference, verify_klee, verify_pair, Claim, KleeOptions, KleeReport, Triple, VerificationReport,
    VerifyOptions,
};

//! Convergence speed, tied average ranks, the modified Friedman test and the
//! Nemenyi critical difference.

mod distribution;
mod friedman;
mod ranks;
mod report;

pub use distribution::{f_cdf, f_critical, ln_gamma, regularized_beta};
pub use friedman::{friedman_modified, nemenyi_cd, nemenyi_q, FriedmanStatistic, NEMENYI_Q_005};
pub use ranks::{convergence_speed, ranks_with_ties, ConvergenceOutcome, RankTable};
pub use report::{rank_report, TestReport};

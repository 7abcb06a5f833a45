//! First-order meta-training over a portfolio of tasks, adaptation of the
//! meta-initialization to a new task, and the comparison baselines.
//!
//! One outer iteration:
//! 1. every task agent is reset to the meta parameters θ_M;
//! 2. each agent runs `episodes_per_iteration` exploratory episodes with one
//!    DDPG update per step on support samples of its own replay buffer;
//! 3. each adapted agent evaluates its critic and actor loss gradients on a
//!    query sample (disjoint from every support sample);
//! 4. the summed query gradients drive one Adam step on θ_M.
//!
//! Differentiating through the inner Adam steps is not attempted: gradients
//! taken at the adapted parameters are applied to θ_M directly.

mod adapt;
mod model;
mod schedule;
mod trainer;

pub use adapt::{
    adapt_from, inner_adapt, meta_adapt_new, multitask_schedule, run_baseline, train_donor, Adaptation, Baseline,
    BaselineKind, ShotRecord,
};
pub use model::{MetaModel, META_FORMAT, META_VERSION};
pub use schedule::MetaSchedule;
pub use trainer::{meta_train, IterationStats, MetaTrainer, TaskWorker};

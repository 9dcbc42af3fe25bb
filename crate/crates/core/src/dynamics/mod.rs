//! Time-dependent Schrödinger propagation under a schedule, perturbative
//! estimates, and bounds.

mod first_order;
mod frame;
mod ising;
mod propagate;

pub use first_order::{
    first_order_probability, first_order_with_bounds, probability_bounds, FirstOrderSeries,
};
pub use frame::{PhaseAccumulator, ScheduleFrame};
pub use ising::{ising_ground_transition, IsingTransition};
pub use propagate::{propagate, transition_probability, PropagateOptions, Trajectory};

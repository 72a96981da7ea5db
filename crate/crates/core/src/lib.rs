//! Multicell power control and user scheduling under a shared interference
//! channel.
//!
//! The crate models `N` cells, each with one access point and `U` users, in
//! the power domain. For every channel realization it computes
//!
//! * the interference-free upper bound on capacity (max-rate scheduling,
//!   every AP at full power, interference ignored),
//! * the full-power lower bound (each cell picks the user with the best SINR
//!   under full interference),
//! * and, for small networks, the joint optimum over schedules and a grid of
//!   power levels.
//!
//! Monte Carlo sweeps over `U` reproduce the capacity scaling laws: `ln ln U`
//! when all users see the same path loss, `(ε/2)·ln U` when users are spread
//! uniformly over the cell, and a transition between the two when an
//! exclusion disk keeps users away from the AP. The [`evt`] module holds the
//! extreme-value tools behind the heavy-tailed case.
//!
//! ```
//! use cellcap::channel::{draw_gain_matrix, Layout, NetworkConfig, Placement};
//! use cellcap::rates::{capacity_lower_bound, capacity_upper_bound};
//!
//! let cfg = NetworkConfig::standard(Placement::UniformDisk);
//! let layout = Layout::for_config(&cfg);
//! let g = draw_gain_matrix(&cfg, &layout, 32, 7);
//! assert!(capacity_lower_bound(&g, &cfg) <= capacity_upper_bound(&g, &cfg));
//! ```

pub mod channel;
pub mod cli;
pub mod error;
pub mod evt;
pub mod montecarlo;
pub mod rates;
pub mod rng;
pub mod schedulers;

pub use error::{Error, Result};

//! The core processor palette.

mod basic;
mod slice;
mod window;

pub use basic::{ApplyFunction, CountDecimate, Filter, Fork, Cumulate, Trim, TurnInto};
pub use slice::SliceProcessor;
pub use window::WindowProcessor;

pub mod fiber;
pub mod lift;
pub mod oracle;
pub mod orbits;
pub mod primitive;
pub mod tables;

pub use fiber::{
    count_fiber_x0mn, count_fiber_x0n, fiber_x0mn, moduli_bounds, primitive_x0mn, residue_x0mn, residue_x0n, x1_fiber,
    ClosedPointClass, FiberReport, PrimitiveSummary, X1Transfer,
};
pub use lift::{lift_residue_prime_power, lifted_classes, x_nn_residue, PrimeLocalDatum};
pub use primitive::{minimal_fields, primitive_prime_power, PrimitiveFields};
pub use tables::{closed_point_classes, local_classes, LocalClass, PathType};

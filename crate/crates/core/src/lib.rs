//! Consistent digital line segments: orders on the integers, the segment
//! systems they induce, and tools for checking and measuring them.

pub mod conformance;
pub mod external;
pub mod hausdorff;
pub mod highdim;
pub mod lines;
pub mod order;
pub mod segment;

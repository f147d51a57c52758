pub mod bct;
pub mod bench_io;
pub mod geometry;
pub mod kinematics;
pub mod problem;
pub mod sha_star;

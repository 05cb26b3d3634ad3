pub mod bundle;
pub mod category;
pub mod cli;
pub mod group;
pub mod io;
pub mod path;
pub mod props;
pub mod reconstruct;
pub mod seed;
pub mod smooth;

#![allow(dead_code)]

pub mod instances;
pub mod rs_oracle;
pub mod sat_oracle;

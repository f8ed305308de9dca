pub mod code;
pub mod dual;
pub mod gf2poly;
pub mod linalg;
pub mod report;
pub mod ring;
pub mod sweep;

pub mod cartier;
pub mod config;
pub mod criteria;
pub mod field;
pub mod linalg;
pub mod localcoh;
pub mod poly;
pub mod witt;

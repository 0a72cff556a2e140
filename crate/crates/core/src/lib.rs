pub mod braid;
pub mod combinatory;
pub mod lambda;
pub mod normalizer;
pub mod operad;
pub mod rewrite;

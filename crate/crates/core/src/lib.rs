pub mod imaginaries;
pub mod jsj;
pub mod sequence;
pub mod stallings;
pub mod verifier;
pub mod whitehead;
pub mod word;

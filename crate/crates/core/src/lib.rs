//! Anticyclotomic theta elements for definite quaternion algebras.

pub mod arith;
pub mod quaternion;
pub mod ideal_classes;
pub mod forms_hecke;
pub mod cm_tower;
pub mod theta_padicL;
pub mod analytic_oracle;

//! Numerical toolkit for elliptic K3 surfaces with a section.
//!
//! An elliptic K3 surface with a section has a Weierstrass model
//! `y²z = 4x³ − g₂(t)xz² − g₃(t)z³` over P¹ with `g₂` of degree 8 and `g₃` of
//! degree 12. Over the complement of the zeros of `Δ = g₂³ − 27g₃²` the fibres
//! are uniformized by `F(z, t) = [℘(z) : ℘′(z) : 1]` for the period lattice of
//! the fibre. Because `F` is holomorphic on `ℂ × (P¹ − S_X)` and the first
//! factor is all of `ℂ`, polydisk maps `(u, v) ↦ F(z₀ + Ru, t₀ + rv)` give
//! upper bounds on the Kobayashi–Eisenman pseudovolume that decay like `1/R`.
//! This crate computes all of the above explicitly:
//!
//! * [`binaryforms`]: forms on P¹, discriminants and roots including `∞`;
//! * [`elliptic`]: period lattices, ℘, Eisenstein sums, `j`;
//! * [`fibration`]: validated Weierstrass fibrations, Kodaira types, `F`;
//! * [`k3lattice`]: the K3 lattice, period points, Néron–Severi lattices and
//!   hyperbolic-plane detection;
//! * [`eisenman`]: pseudovolume upper bounds and vanishing certificates.

pub mod binaryforms;
pub mod eisenman;
pub mod elliptic;
pub mod error;
pub mod fibration;
pub mod k3lattice;
pub mod sample;

pub use error::{Error, Result};

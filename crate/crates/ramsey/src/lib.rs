//! Multicolor Ramsey bound workbench.
//!
//! Three layers, each usable on its own:
//!
//! * **Witnesses** ([`coloring`], [`construct`], [`graph`]): complete-graph
//!   edge colorings that certify lower bounds `R(k_1..k_r) >= n + 1` by
//!   exhaustive monochromatic-clique search, plus the classical
//!   constructions (cyclic colorings, finite-field cubic residues, product
//!   constructions, sum-free partitions) that generate them.
//! * **Bounds** ([`engine`]): a knowledge base of lower/upper bounds keyed
//!   by sorted parameter lists, closed under a configurable set of
//!   inequality rules with full provenance, plus consistency probes for the
//!   off-diagonal move assumption and root-growth summaries.
//! * **Capacity** ([`capacity`]): Shannon-capacity style probes — strong
//!   graph powers, independence numbers, and the induced lower estimates.
//!
//! Values flow between layers: a verified witness yields a fact the engine
//! can ingest, and engine-side products mirror witness-side product
//! constructions, so each side cross-checks the other.

pub mod bits;
pub mod capacity;
pub mod coloring;
pub mod construct;
pub mod data;
pub mod engine;
pub mod formats;
pub mod graph;
pub mod params;

//! Tracking-by-detection toolkit for rugged outdoor environments.
//!
//! The crate bundles the full per-frame loop of a LiDAR/camera perception
//! stack, minus the neural detectors themselves:
//!
//! - [`geometry`]: vectors, poses, oriented boxes, pinhole projection
//! - [`assignment`]: gated minimum-cost bipartite matching
//! - [`kalman`]: constant-velocity filter over `[x y z vx vy vz]`
//! - [`sim`]: deterministic rugged-terrain scenario generator (detection
//!   emulator, labeled point clouds, ground truth)
//! - [`tracker`]: adaptive-threshold association and lifecycle management
//! - [`predictor`]: memory-retrieval trajectory prediction with a Kalman
//!   short-horizon indicator and fallback
//! - [`mapper`]: tracking-driven dynamic point removal into a static map
//! - [`metrics`]: MOTA/MOTP/OCA, ADE/FDE, and map PR/RR/F1
//! - [`pipeline`]: the track → predict → map loop and its log records
//!
//! The crate is `no_std`-compatible (`alloc` required); file formats, the
//! CLI, and wall-clock timing live in the companion `ruggedmot-cli` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod assignment;
pub mod geometry;
pub mod kalman;
pub mod linalg;
pub mod mapper;
pub mod metrics;
pub mod pipeline;
pub mod predictor;
pub mod sim;
pub mod tracker;

pub use geometry::{euclidean2, euclidean3, CameraModel, Detection2D, OrientedBox3, Pose, Vec3};

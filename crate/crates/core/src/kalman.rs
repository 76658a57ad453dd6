//! Constant-velocity Kalman filter over `[x y z vx vy vz]`.
//!
//! The 6x6 covariance is kept as three 3x3 blocks (position, cross,
//! velocity); the update uses the Joseph form so the covariance stays
//! symmetric positive definite over long runs. Process noise follows the
//! discrete white-noise-acceleration model with intensity `q` (m²/s⁴ per
//! axis); measurements are positions with isotropic variance `r` (m²).

use core::fmt;

use crate::geometry::Vec3;
use crate::linalg::Mat3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KalmanError {
    /// Innovation covariance was not invertible; the noise configuration is
    /// degenerate.
    SingularInnovation,
}

impl fmt::Display for KalmanError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KalmanError::SingularInnovation => write!(f, "singular innovation covariance"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for KalmanError {}

/// Constant-velocity filter state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KalmanCV {
    pub pos: Vec3,
    pub vel: Vec3,
    /// Covariance blocks: position, position-velocity cross, velocity.
    pub cov_pp: Mat3,
    pub cov_pv: Mat3,
    pub cov_vv: Mat3,
    /// Process-noise intensity (white-noise acceleration variance).
    pub q: f64,
    /// Per-axis measurement variance.
    pub r: f64,
}

impl KalmanCV {
    pub fn new(pos: Vec3, vel: Vec3, pos_var: f64, vel_var: f64, q: f64, r: f64) -> KalmanCV {
        KalmanCV {
            pos,
            vel,
            cov_pp: Mat3::diag(pos_var),
            cov_pv: Mat3::ZERO,
            cov_vv: Mat3::diag(vel_var),
            q,
            r,
        }
    }

    /// Propagate the state by `dt` seconds; the receiver is left untouched.
    pub fn predict(&self, dt: f64) -> KalmanCV {
        let pvp = self.cov_pv.transpose();
        let q = self.q;
        let qpp = Mat3::diag(q * dt * dt * dt * dt / 4.0);
        let qpv = Mat3::diag(q * dt * dt * dt / 2.0);
        let qvv = Mat3::diag(q * dt * dt);

        KalmanCV {
            pos: self.pos + self.vel.scaled(dt),
            vel: self.vel,
            cov_pp: self
                .cov_pp
                .add(self.cov_pv.add(pvp).scale(dt))
                .add(self.cov_vv.scale(dt * dt))
                .add(qpp)
                .symmetrized(),
            cov_pv: self.cov_pv.add(self.cov_vv.scale(dt)).add(qpv),
            cov_vv: self.cov_vv.add(qvv).symmetrized(),
            ..*self
        }
    }

    /// Fuse a position measurement `z`; the receiver is left untouched.
    pub fn update(&self, z: Vec3) -> Result<KalmanCV, KalmanError> {
        let s = self.cov_pp.add(Mat3::diag(self.r));
        let s_inv = s.inverse().ok_or(KalmanError::SingularInnovation)?;

        let k_p = self.cov_pp.mul(s_inv);
        let k_v = self.cov_pv.transpose().mul(s_inv);
        let innovation = z - self.pos;

        let a = Mat3::identity().sub(k_p);
        let r = self.r;

        let cov_pp = a
            .mul(self.cov_pp)
            .mul(a.transpose())
            .add(k_p.mul(k_p.transpose()).scale(r))
            .symmetrized();
        let cov_pv = a
            .mul(self.cov_pv.sub(self.cov_pp.mul(k_v.transpose())))
            .add(k_p.mul(k_v.transpose()).scale(r));
        let cov_vv = k_v
            .mul(self.cov_pp)
            .mul(k_v.transpose())
            .sub(k_v.mul(self.cov_pv))
            .sub(self.cov_pv.transpose().mul(k_v.transpose()))
            .add(self.cov_vv)
            .add(k_v.mul(k_v.transpose()).scale(r))
            .symmetrized();

        Ok(KalmanCV {
            pos: self.pos + k_p.mul_vec(innovation),
            vel: self.vel + k_v.mul_vec(innovation),
            cov_pp,
            cov_pv,
            cov_vv,
            ..*self
        })
    }

    /// Full 6x6 covariance, rows `[x y z vx vy vz]`.
    pub fn covariance6(&self) -> [[f64; 6]; 6] {
        let mut m = [[0.0; 6]; 6];
        let pvp = self.cov_pv.transpose();
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = self.cov_pp.0[i][j];
                m[i][j + 3] = self.cov_pv.0[i][j];
                m[i + 3][j] = pvp.0[i][j];
                m[i + 3][j + 3] = self.cov_vv.0[i][j];
            }
        }
        m
    }

    pub fn trace(&self) -> f64 {
        self.cov_pp.trace() + self.cov_vv.trace()
    }

    /// Horizontal speed estimate, the `sqrt(vx² + vy²)` of the gate formula.
    pub fn horizontal_speed(&self) -> f64 {
        self.vel.horizontal_norm()
    }
}

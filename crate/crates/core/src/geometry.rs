//! Shared geometric primitives.
//!
//! Conventions, fixed once for the whole workspace: right-handed
//! coordinates; LiDAR frame x forward, y left, z up; image origin at the
//! top-left corner. The pinhole model carries no distortion.

use alloc::string::String;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::de::{self, SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[cfg(not(feature = "std"))]
use num_traits::Float;

/// Depth below which a point counts as behind the camera.
pub const MIN_CAMERA_DEPTH: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeometryError {
    /// Projection target has camera-frame depth `z_c <= MIN_CAMERA_DEPTH`.
    BehindCamera,
}

impl fmt::Display for GeometryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeometryError::BehindCamera => write!(f, "point is behind the camera"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for GeometryError {}

/// 3D point or vector in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// Length of the horizontal (x, y) component.
    pub fn horizontal_norm(self) -> f64 {
        (self.x * self.x + self.y * self.y).sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn scaled(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        self.scaled(s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

// Serialized as a bare `[x, y, z]` triple; point-heavy records stay compact.
impl Serialize for Vec3 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(3))?;
        seq.serialize_element(&self.x)?;
        seq.serialize_element(&self.y)?;
        seq.serialize_element(&self.z)?;
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Vec3 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Vec3;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "an [x, y, z] array")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Vec3, A::Error> {
                let x = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let y = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(1, &self))?;
                let z = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(2, &self))?;
                Ok(Vec3::new(x, y, z))
            }
        }
        d.deserialize_seq(V)
    }
}

/// Unit quaternion, `w + xi + yj + zk`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quat {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quat {
    pub const IDENTITY: Quat = Quat { w: 1.0, x: 0.0, y: 0.0, z: 0.0 };

    /// Rotation by `yaw` radians about +z.
    pub fn from_yaw(yaw: f64) -> Quat {
        let h = 0.5 * yaw;
        Quat { w: h.cos(), x: 0.0, y: 0.0, z: h.sin() }
    }

    pub fn from_axis_angle(axis: Vec3, angle: f64) -> Quat {
        let n = axis.norm();
        if n < 1e-12 {
            return Quat::IDENTITY;
        }
        let h = 0.5 * angle;
        let s = h.sin() / n;
        Quat { w: h.cos(), x: axis.x * s, y: axis.y * s, z: axis.z * s }
    }

    pub fn norm(self) -> f64 {
        (self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn normalized(self) -> Quat {
        let n = self.norm();
        Quat { w: self.w / n, x: self.x / n, y: self.y / n, z: self.z / n }
    }

    pub fn conjugate(self) -> Quat {
        Quat { w: self.w, x: -self.x, y: -self.y, z: -self.z }
    }

    pub fn mul(self, o: Quat) -> Quat {
        Quat {
            w: self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            x: self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            y: self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            z: self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        }
    }

    /// Rotate a vector: `q v q*`.
    pub fn rotate(self, v: Vec3) -> Vec3 {
        // Rodrigues form, cheaper than two quaternion products.
        let u = Vec3::new(self.x, self.y, self.z);
        let t = u.cross(v).scaled(2.0);
        v + t.scaled(self.w) + u.cross(t)
    }

    /// Heading of the rotated +x axis, in radians.
    pub fn yaw(self) -> f64 {
        let fwd = self.rotate(Vec3::new(1.0, 0.0, 0.0));
        fwd.y.atan2(fwd.x)
    }
}

impl Serialize for Quat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(4))?;
        seq.serialize_element(&self.w)?;
        seq.serialize_element(&self.x)?;
        seq.serialize_element(&self.y)?;
        seq.serialize_element(&self.z)?;
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Quat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Quat;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "a [w, x, y, z] array")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Quat, A::Error> {
                let w = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let x = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(1, &self))?;
                let y = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(2, &self))?;
                let z = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(3, &self))?;
                Ok(Quat { w, x, y, z })
            }
        }
        d.deserialize_seq(V)
    }
}

/// Rigid transform: `apply(p) = R p + t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    pub position: Vec3,
    pub orientation: Quat,
}

impl Pose {
    pub const IDENTITY: Pose = Pose { position: Vec3::ZERO, orientation: Quat::IDENTITY };

    pub fn new(position: Vec3, orientation: Quat) -> Pose {
        Pose { position, orientation: orientation.normalized() }
    }

    pub fn from_xyz_yaw(x: f64, y: f64, z: f64, yaw: f64) -> Pose {
        Pose { position: Vec3::new(x, y, z), orientation: Quat::from_yaw(yaw) }
    }

    pub fn apply(self, p: Vec3) -> Vec3 {
        self.orientation.rotate(p) + self.position
    }

    pub fn inverse(self) -> Pose {
        let q = self.orientation.conjugate();
        Pose { position: -q.rotate(self.position), orientation: q }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(self, other: Pose) -> Pose {
        Pose {
            position: self.apply(other.position),
            orientation: self.orientation.mul(other.orientation).normalized(),
        }
    }

    pub fn is_valid(self) -> bool {
        self.position.is_finite() && (self.orientation.norm() - 1.0).abs() <= 1e-9
    }
}

/// Apply a rigid transform to a point.
pub fn transform_point(p: Vec3, pose: &Pose) -> Vec3 {
    pose.apply(p)
}

/// L2 distance between two 3D points, meters.
pub fn euclidean3(a: Vec3, b: Vec3) -> f64 {
    (a - b).norm()
}

/// L2 distance between two pixel coordinates.
pub fn euclidean2(a: (f64, f64), b: (f64, f64)) -> f64 {
    let du = a.0 - b.0;
    let dv = a.1 - b.1;
    (du * du + dv * dv).sqrt()
}

/// 3D detection: an oriented bounding box with class and confidence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrientedBox3 {
    /// Box center, meters (frame depends on context; detections are LiDAR-frame).
    pub center: Vec3,
    /// Full extents along the box axes, meters; all strictly positive.
    pub size: Vec3,
    /// Rotation of the box x-axis about vertical, radians.
    pub yaw: f64,
    pub class_label: String,
    /// Detection confidence in [0, 1].
    pub score: f64,
}

impl OrientedBox3 {
    pub fn is_valid(&self) -> bool {
        self.center.is_finite()
            && self.size.x > 0.0
            && self.size.y > 0.0
            && self.size.z > 0.0
            && self.yaw.is_finite()
            && (0.0..=1.0).contains(&self.score)
    }

    /// True if `p` (same frame as `center`) lies inside the box inflated by
    /// `margin` on every side.
    pub fn contains_inflated(&self, p: Vec3, margin: f64) -> bool {
        let d = p - self.center;
        let (s, c) = self.yaw.sin_cos();
        let lx = c * d.x + s * d.y;
        let ly = -s * d.x + c * d.y;
        lx.abs() <= 0.5 * self.size.x + margin
            && ly.abs() <= 0.5 * self.size.y + margin
            && d.z.abs() <= 0.5 * self.size.z + margin
    }
}

/// 2D image-space detection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Detection2D {
    /// Box center, pixels, image origin top-left.
    pub center_px: (f64, f64),
    /// Box width/height in pixels, non-negative.
    pub extent_px: (f64, f64),
    pub class_label: String,
    pub score: f64,
}

impl Detection2D {
    pub fn is_valid(&self) -> bool {
        self.center_px.0.is_finite()
            && self.center_px.1.is_finite()
            && self.extent_px.0 >= 0.0
            && self.extent_px.1 >= 0.0
            && (0.0..=1.0).contains(&self.score)
    }
}

/// Zero-distortion pinhole camera plus its mounting relative to the LiDAR.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CameraModel {
    pub fx: f64,
    pub fy: f64,
    pub cx: f64,
    pub cy: f64,
    pub width: u32,
    pub height: u32,
    /// camera ← LiDAR transform.
    pub extrinsic: Pose,
}

impl CameraModel {
    /// Forward-looking camera: LiDAR (x fwd, y left, z up) to the usual
    /// camera frame (z fwd, x right, y down).
    pub fn forward_mount() -> Pose {
        // x_l -> z_c, y_l -> -x_c, z_l -> -y_c.
        let q = Quat { w: 0.5, x: 0.5, y: -0.5, z: 0.5 };
        Pose { position: Vec3::ZERO, orientation: q }
    }

    pub fn with_defaults() -> CameraModel {
        CameraModel {
            fx: 400.0,
            fy: 400.0,
            cx: 320.0,
            cy: 240.0,
            width: 640,
            height: 480,
            extrinsic: Self::forward_mount(),
        }
    }

    pub fn is_valid(&self) -> bool {
        self.fx > 0.0
            && self.fy > 0.0
            && self.cx > 0.0
            && self.cx < self.width as f64
            && self.cy > 0.0
            && self.cy < self.height as f64
            && self.extrinsic.is_valid()
    }

    /// Project a LiDAR-frame point to pixel coordinates.
    pub fn project(&self, p_lidar: Vec3) -> Result<(f64, f64), GeometryError> {
        let pc = self.extrinsic.apply(p_lidar);
        if pc.z <= MIN_CAMERA_DEPTH {
            return Err(GeometryError::BehindCamera);
        }
        Ok((self.fx * (pc.x / pc.z) + self.cx, self.fy * (pc.y / pc.z) + self.cy))
    }

    /// Invert the projection at a known camera-frame depth; returns the
    /// LiDAR-frame point.
    pub fn back_project(&self, uv: (f64, f64), depth: f64) -> Vec3 {
        let pc = Vec3::new(
            (uv.0 - self.cx) / self.fx * depth,
            (uv.1 - self.cy) / self.fy * depth,
            depth,
        );
        self.extrinsic.inverse().apply(pc)
    }

    pub fn in_image(&self, uv: (f64, f64)) -> bool {
        uv.0 >= 0.0 && uv.0 < self.width as f64 && uv.1 >= 0.0 && uv.1 < self.height as f64
    }
}

/// Project a LiDAR-frame point through a camera model.
pub fn project_to_image(point: Vec3, cam: &CameraModel) -> Result<(f64, f64), GeometryError> {
    cam.project(point)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn axis_cam() -> CameraModel {
        // Identity extrinsic: "LiDAR" frame already is the camera frame.
        CameraModel { extrinsic: Pose::IDENTITY, ..CameraModel::with_defaults() }
    }

    #[test]
    fn principal_point_projects_to_center() {
        let cam = axis_cam();
        let uv = cam.project(Vec3::new(0.0, 0.0, 5.0)).unwrap();
        assert_relative_eq!(uv.0, 320.0);
        assert_relative_eq!(uv.1, 240.0);
    }

    #[test]
    fn off_axis_projection() {
        let cam = axis_cam();
        let uv = cam.project(Vec3::new(1.0, 0.0, 2.0)).unwrap();
        assert_relative_eq!(uv.0, 520.0);
        assert_relative_eq!(uv.1, 240.0);
    }

    #[test]
    fn zero_depth_is_behind_camera() {
        let cam = axis_cam();
        assert_eq!(cam.project(Vec3::new(0.0, 0.0, 0.0)), Err(GeometryError::BehindCamera));
        assert_eq!(cam.project(Vec3::new(1.0, 1.0, -3.0)), Err(GeometryError::BehindCamera));
    }

    #[test]
    fn forward_mount_maps_lidar_axes() {
        let m = CameraModel::forward_mount();
        let fwd = m.apply(Vec3::new(1.0, 0.0, 0.0));
        let left = m.apply(Vec3::new(0.0, 1.0, 0.0));
        let up = m.apply(Vec3::new(0.0, 0.0, 1.0));
        assert_relative_eq!(fwd.z, 1.0, epsilon = 1e-12);
        assert_relative_eq!(left.x, -1.0, epsilon = 1e-12);
        assert_relative_eq!(up.y, -1.0, epsilon = 1e-12);
    }

    #[test]
    fn forward_camera_sees_forward_point() {
        let cam = CameraModel::with_defaults();
        let uv = cam.project(Vec3::new(10.0, 0.0, 0.0)).unwrap();
        assert_relative_eq!(uv.0, 320.0, epsilon = 1e-9);
        assert_relative_eq!(uv.1, 240.0, epsilon = 1e-9);
        // A point to the LiDAR's left lands on the left half of the image.
        let uv = cam.project(Vec3::new(10.0, 2.0, 0.0)).unwrap();
        assert!(uv.0 < 320.0);
        // A point above the sensor lands on the upper half.
        let uv = cam.project(Vec3::new(10.0, 0.0, 2.0)).unwrap();
        assert!(uv.1 < 240.0);
    }

    #[test]
    fn transform_identity_and_translation() {
        let p = Vec3::new(1.0, 2.0, 3.0);
        assert_eq!(transform_point(p, &Pose::IDENTITY), p);
        let t = Pose::from_xyz_yaw(1.0, 1.0, 1.0, 0.0);
        assert_eq!(transform_point(Vec3::ZERO, &t), Vec3::new(1.0, 1.0, 1.0));
    }

    #[test]
    fn quarter_turn_about_z() {
        let t = Pose::from_xyz_yaw(0.0, 0.0, 0.0, core::f64::consts::FRAC_PI_2);
        let p = transform_point(Vec3::new(1.0, 0.0, 0.0), &t);
        assert_relative_eq!(p.x, 0.0, epsilon = 1e-9);
        assert_relative_eq!(p.y, 1.0, epsilon = 1e-9);
        assert_relative_eq!(p.z, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn euclidean_examples() {
        let a = Vec3::new(0.0, 0.0, 0.0);
        assert_eq!(euclidean3(a, a), 0.0);
        assert_relative_eq!(euclidean3(a, Vec3::new(3.0, 4.0, 0.0)), 5.0);
        assert_relative_eq!(euclidean2((0.0, 0.0), (6.0, 8.0)), 10.0);
    }

    #[test]
    fn box_containment() {
        let b = OrientedBox3 {
            center: Vec3::ZERO,
            size: Vec3::new(1.0, 1.0, 2.0),
            yaw: 0.0,
            class_label: "person".into(),
            score: 1.0,
        };
        assert!(b.contains_inflated(Vec3::new(0.0, 0.0, 0.5), 0.0));
        assert!(!b.contains_inflated(Vec3::new(5.0, 5.0, 0.0), 0.0));
        assert!(b.contains_inflated(Vec3::new(0.7, 0.0, 0.0), 0.3));
        assert!(!b.contains_inflated(Vec3::new(0.9, 0.0, 0.0), 0.3));
    }

    #[test]
    fn rotated_box_containment() {
        let b = OrientedBox3 {
            center: Vec3::ZERO,
            size: Vec3::new(4.0, 1.0, 1.0),
            yaw: core::f64::consts::FRAC_PI_2,
            class_label: "trolley".into(),
            score: 1.0,
        };
        // Long axis now points along +y.
        assert!(b.contains_inflated(Vec3::new(0.0, 1.9, 0.0), 0.0));
        assert!(!b.contains_inflated(Vec3::new(1.9, 0.0, 0.0), 0.0));
    }

    proptest! {
        #[test]
        fn project_back_project_round_trip(
            x in -20.0f64..20.0, y in -20.0f64..20.0, z in 0.5f64..50.0
        ) {
            let cam = CameraModel::with_defaults();
            // Build a LiDAR point with known camera depth z.
            let p_lidar = cam.extrinsic.inverse().apply(Vec3::new(x, y, z));
            let uv = cam.project(p_lidar).unwrap();
            let back = cam.back_project(uv, z);
            prop_assert!(euclidean3(back, p_lidar) < 1e-6);
        }

        #[test]
        fn transform_round_trip(
            px in -100.0f64..100.0, py in -100.0f64..100.0, pz in -100.0f64..100.0,
            tx in -50.0f64..50.0, ty in -50.0f64..50.0, tz in -50.0f64..50.0,
            yaw in -3.2f64..3.2,
        ) {
            let t = Pose::from_xyz_yaw(tx, ty, tz, yaw);
            let p = Vec3::new(px, py, pz);
            let back = t.inverse().apply(t.apply(p));
            prop_assert!(euclidean3(back, p) < 1e-9);
        }

        #[test]
        fn triangle_inequality(
            ax in -10.0f64..10.0, ay in -10.0f64..10.0, az in -10.0f64..10.0,
            bx in -10.0f64..10.0, by in -10.0f64..10.0, bz in -10.0f64..10.0,
            cx in -10.0f64..10.0, cy in -10.0f64..10.0, cz in -10.0f64..10.0,
        ) {
            let a = Vec3::new(ax, ay, az);
            let b = Vec3::new(bx, by, bz);
            let c = Vec3::new(cx, cy, cz);
            prop_assert!(euclidean3(a, c) <= euclidean3(a, b) + euclidean3(b, c) + 1e-12);
        }
    }
}

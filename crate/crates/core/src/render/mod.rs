//! Ray-cast images of real surfaces `f = 0`, clipped to a ball around the
//! origin. Output is deterministic: every pixel is a pure function of the
//! surface, camera, lighting and clip radius.

mod raycast;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::exactnum::GoldenNumber;
use crate::multipoly::MultiPoly;

pub use raycast::{first_hit, RayCaster, RayHit};

type P = MultiPoly<GoldenNumber>;
type V3 = [f64; 3];

pub const DEFAULT_CLIP_RADIUS: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RenderError {
    #[error("eye and look-at point coincide")]
    EyeAtTarget,
    #[error("up vector is parallel to the view direction")]
    UpParallel,
    #[error("image size must be positive")]
    EmptyImage,
    #[error("field of view must lie strictly between 0 and 180 degrees")]
    BadFieldOfView,
    #[error("clip radius must be positive")]
    BadClipRadius,
}

/// Pinhole camera with exact rational placement.
#[derive(Clone, Debug, PartialEq)]
pub struct Camera {
    pub eye: [BigRational; 3],
    pub look_at: [BigRational; 3],
    pub up: [BigRational; 3],
    /// Vertical field of view in degrees.
    pub fov_degrees: BigRational,
    pub width: u32,
    pub height: u32,
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn f(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn sub(a: V3, b: V3) -> V3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: V3, b: V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: V3, b: V3) -> V3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn normalize(a: V3) -> V3 {
    let n = dot(a, a).sqrt();
    a.map(|x| x / n)
}

impl Camera {
    pub fn new(
        eye: [BigRational; 3],
        look_at: [BigRational; 3],
        up: [BigRational; 3],
        fov_degrees: BigRational,
        width: u32,
        height: u32,
    ) -> Result<Self, RenderError> {
        if width == 0 || height == 0 {
            return Err(RenderError::EmptyImage);
        }
        if !fov_degrees.is_positive() || fov_degrees >= q(180) {
            return Err(RenderError::BadFieldOfView);
        }
        let view: Vec<BigRational> = (0..3).map(|i| &look_at[i] - &eye[i]).collect();
        if view.iter().all(Zero::is_zero) {
            return Err(RenderError::EyeAtTarget);
        }
        let c = [
            &view[1] * &up[2] - &view[2] * &up[1],
            &view[2] * &up[0] - &view[0] * &up[2],
            &view[0] * &up[1] - &view[1] * &up[0],
        ];
        if c.iter().all(Zero::is_zero) {
            return Err(RenderError::UpParallel);
        }
        Ok(Camera {
            eye,
            look_at,
            up,
            fov_degrees,
            width,
            height,
        })
    }

    /// The oblique view used for the catalog surfaces: eye `(7, 5, 4)`
    /// looking at `(0, 0, 1/4)` with `z` up and a 40° field of view, which
    /// frames the default clip ball. The target sits just above the origin
    /// so that the centre ray meets the sextic transversally.
    pub fn default_view(width: u32, height: u32) -> Result<Self, RenderError> {
        Camera::new(
            [q(7), q(5), q(4)],
            [q(0), q(0), BigRational::new(1.into(), 4.into())],
            [q(0), q(0), q(1)],
            q(40),
            width,
            height,
        )
    }

    /// Orthonormal camera frame `(forward, right, up)` in floating point.
    fn frame(&self) -> (V3, V3, V3) {
        let eye = self.eye.each_ref().map(f);
        let fwd = normalize(sub(self.look_at.each_ref().map(f), eye));
        let right = normalize(cross(fwd, self.up.each_ref().map(f)));
        let up = cross(right, fwd);
        (fwd, right, up)
    }

    /// Direction through the centre of pixel `(i, j)`, row `j` from the top.
    /// Mirror-image pixels get exactly mirrored screen offsets.
    pub fn ray_direction(&self, i: u32, j: u32) -> V3 {
        let (fwd, right, up) = self.frame();
        let s = (0.5 * f(&self.fov_degrees)).to_radians().tan() / self.height as f64;
        let sx = (2.0 * i as f64 + 1.0 - self.width as f64) * s;
        let sy = (self.height as f64 - 2.0 * j as f64 - 1.0) * s;
        [0, 1, 2].map(|k| fwd[k] + sx * right[k] + sy * up[k])
    }
}

/// Single key light, gray-white material, dark background.
#[derive(Clone, Debug, PartialEq)]
pub struct Lighting {
    /// Light direction in camera coordinates `(right, up, backward)`.
    pub key: V3,
    pub material: V3,
    pub background: [u8; 3],
    pub ambient: f64,
    pub diffuse: f64,
    pub specular: f64,
    pub shininess: i32,
}

impl Default for Lighting {
    fn default() -> Self {
        Lighting {
            key: normalize([-0.4, 0.6, 0.7]),
            material: [0.86, 0.86, 0.82],
            background: [24, 26, 34],
            ambient: 0.12,
            diffuse: 0.78,
            specular: 0.35,
            shininess: 40,
        }
    }
}

/// 8-bit RGB raster, rows top to bottom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Image {
    pub width: u32,
    pub height: u32,
    pub pixels: Vec<u8>,
}

impl Image {
    /// Binary PPM (P6).
    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }

    pub fn pixel(&self, i: u32, j: u32) -> [u8; 3] {
        let k = 3 * (j as usize * self.width as usize + i as usize);
        [self.pixels[k], self.pixels[k + 1], self.pixels[k + 2]]
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RenderStats {
    pub hits: usize,
    pub exact_fallbacks: usize,
    pub near_singular: usize,
    /// Largest certified bound on `|f|` at a hit point.
    pub max_residual: f64,
}

impl RenderStats {
    fn merge(mut self, o: RenderStats) -> RenderStats {
        self.hits += o.hits;
        self.exact_fallbacks += o.exact_fallbacks;
        self.near_singular += o.near_singular;
        self.max_residual = self.max_residual.max(o.max_residual);
        self
    }
}

#[derive(Clone, Debug)]
pub struct Render {
    pub image: Image,
    /// Per pixel: whether the ray hit the clipped surface.
    pub mask: Vec<bool>,
    pub stats: RenderStats,
}

/// Parameter range of a ray inside the ball `|x| ≤ r`, from `t = 0` on.
fn clip_range(eye: V3, d: V3, r: f64) -> Option<(f64, f64)> {
    let a = dot(d, d);
    let b = dot(eye, d);
    let c = dot(eye, eye) - r * r;
    let disc = b * b - a * c;
    if disc <= 0.0 {
        return None;
    }
    let s = disc.sqrt();
    let (t0, t1) = ((-b - s) / a, (-b + s) / a);
    (t1 > 0.0).then_some((t0.max(0.0), t1))
}

fn shade(hit: &RayHit, d: V3, frame: (V3, V3, V3), light: &Lighting) -> [u8; 3] {
    let (fwd, right, up) = frame;
    let l = [0, 1, 2].map(|k| light.key[0] * right[k] + light.key[1] * up[k] - light.key[2] * fwd[k]);
    let v = normalize(d.map(|x| -x));
    let n = hit.normal.unwrap_or(v);
    let diff = dot(n, l).max(0.0);
    let h = normalize([l[0] + v[0], l[1] + v[1], l[2] + v[2]]);
    let spec = if diff > 0.0 { dot(n, h).max(0.0).powi(light.shininess) } else { 0.0 };
    light.material.map(|m| {
        let c = m * (light.ambient + light.diffuse * diff) + light.specular * spec;
        (c.clamp(0.0, 1.0) * 255.0).round() as u8
    })
}

/// Render `f = 0` (homogeneous, or affine in `x, y, z`) inside the ball of
/// radius `clip` around the origin.
pub fn render(f: &P, camera: &Camera, lighting: &Lighting, clip: f64) -> Result<Render, RenderError> {
    if !(clip > 0.0) {
        return Err(RenderError::BadClipRadius);
    }
    let caster = RayCaster::new(f, &camera.eye);
    let eye = caster.origin();
    let frame = camera.frame();
    let w = camera.width as usize;
    let rows: Vec<(Vec<u8>, Vec<bool>, RenderStats)> = (0..camera.height)
        .into_par_iter()
        .map(|j| {
            let mut px = Vec::with_capacity(3 * w);
            let mut mask = Vec::with_capacity(w);
            let mut stats = RenderStats::default();
            for i in 0..camera.width {
                let d = camera.ray_direction(i, j);
                let hit = clip_range(eye, d, clip).and_then(|(t0, t1)| caster.first_hit(&d, t0, t1));
                match hit {
                    Some(h) => {
                        stats.hits += 1;
                        stats.exact_fallbacks += h.exact_fallback as usize;
                        stats.near_singular += h.normal.is_none() as usize;
                        stats.max_residual = stats.max_residual.max(h.residual);
                        px.extend_from_slice(&shade(&h, d, frame, lighting));
                        mask.push(true);
                    }
                    None => {
                        px.extend_from_slice(&lighting.background);
                        mask.push(false);
                    }
                }
            }
            (px, mask, stats)
        })
        .collect();
    let mut pixels = Vec::with_capacity(3 * w * camera.height as usize);
    let mut mask = Vec::with_capacity(w * camera.height as usize);
    let mut stats = RenderStats::default();
    for (p, m, s) in rows {
        pixels.extend(p);
        mask.extend(m);
        stats = stats.merge(s);
    }
    Ok(Render {
        image: Image {
            width: camera.width,
            height: camera.height,
            pixels,
        },
        mask,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::sphere;

    fn cam(eye: [i64; 3], look: [i64; 3], size: u32) -> Camera {
        Camera::new(eye.map(q), look.map(q), [q(0), q(1), q(0)], q(40), size, size).unwrap()
    }

    #[test]
    fn ppm_payload_size() {
        let r = render(&sphere(), &Camera::default_view(8, 8).unwrap(), &Lighting::default(), 3.0).unwrap();
        let ppm = r.image.to_ppm();
        assert!(ppm.starts_with(b"P6\n8 8\n255\n"));
        assert_eq!(ppm.len() - b"P6\n8 8\n255\n".len(), 192);
    }

    #[test]
    fn sphere_centre_pixel_hits() {
        let r = render(&sphere(), &cam([0, 0, 5], [0, 0, 0], 33), &Lighting::default(), 3.0).unwrap();
        assert!(r.mask[16 * 33 + 16]);
        assert!(!r.mask[0]);
        assert_eq!(r.stats.max_residual, r.stats.max_residual.min(1e-12));
    }

    #[test]
    fn looking_away_gives_background() {
        let light = Lighting::default();
        let r = render(&sphere(), &cam([0, 0, 5], [0, 0, 10], 16), &light, 3.0).unwrap();
        assert_eq!(r.stats.hits, 0);
        assert!(r.image.pixels.chunks(3).all(|p| p == light.background));
    }

    #[test]
    fn camera_validation() {
        let z = [q(0), q(0), q(0)];
        let up = [q(0), q(0), q(1)];
        assert_eq!(Camera::new(z.clone(), z.clone(), up.clone(), q(40), 4, 4), Err(RenderError::EyeAtTarget));
        assert_eq!(
            Camera::new([q(0), q(0), q(5)], z.clone(), up.clone(), q(40), 4, 4),
            Err(RenderError::UpParallel)
        );
        assert_eq!(Camera::new([q(1), q(0), q(5)], z.clone(), up.clone(), q(0), 4, 4), Err(RenderError::BadFieldOfView));
        assert_eq!(Camera::new([q(1), q(0), q(5)], z, up, q(40), 0, 4), Err(RenderError::EmptyImage));
        assert!(render(&sphere(), &cam([0, 0, 5], [0, 0, 0], 4), &Lighting::default(), 0.0).is_err());
    }

    #[test]
    fn mirrored_pixels_have_mirrored_directions() {
        let c = cam([0, 0, 5], [0, 0, 0], 7);
        let a = c.ray_direction(1, 2);
        let b = c.ray_direction(5, 4);
        assert_eq!([a[0], a[1], a[2]], [-b[0], -b[1], b[2]]);
    }
}

//! Escape-time backdrop with a root set drawn on top, written as P6.

use multequi_core::{CFloat, RootSet};

/// A rectangle of the parameter plane sampled on a pixel grid.
#[derive(Debug, Clone)]
pub struct Viewport {
    pub center: CFloat,
    /// Extent along the real axis; the imaginary extent follows from the
    /// aspect ratio.
    pub span: f64,
    pub width: u32,
    pub height: u32,
}

impl Viewport {
    pub fn new(center: [f64; 2], span: f64, width: u32, height: u32) -> Result<Self, String> {
        if width == 0 || height == 0 {
            return Err("pixel dimensions must be positive".into());
        }
        if !(span > 0.0 && span.is_finite()) {
            return Err("span must be positive".into());
        }
        Ok(Viewport { center: CFloat::new(center[0], center[1], 53), span, width, height })
    }

    fn pixel_size(&self) -> f64 {
        self.span / self.width as f64
    }

    /// Parameter at the middle of pixel `(x, y)`; row 0 is the top.
    pub fn point(&self, x: u32, y: u32) -> (f64, f64) {
        let (cx, cy) = self.center.to_c64();
        let s = self.pixel_size();
        let re = cx + (x as f64 + 0.5 - self.width as f64 / 2.0) * s;
        let im = cy - (y as f64 + 0.5 - self.height as f64 / 2.0) * s;
        (re, im)
    }

    /// Pixel containing `(re, im)`, possibly outside the image.
    pub fn pixel(&self, re: f64, im: f64) -> (i64, i64) {
        let (cx, cy) = self.center.to_c64();
        let s = self.pixel_size();
        let x = ((re - cx) / s + self.width as f64 / 2.0).floor();
        let y = ((cy - im) / s + self.height as f64 / 2.0).floor();
        (x as i64, y as i64)
    }
}

#[derive(Debug, Clone)]
pub struct RenderSpec {
    pub viewport: Viewport,
    pub max_iter: u32,
    pub overlay: RootSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image {
    pub width: u32,
    pub height: u32,
    /// RGB, row-major from the top.
    pub pixels: Vec<u8>,
    /// Roots whose square touches the image.
    pub marks: usize,
}

pub const MARK: [u8; 3] = [255, 0, 0];

fn escape_time(re: f64, im: f64, max_iter: u32) -> Option<u32> {
    let (mut x, mut y) = (0.0f64, 0.0f64);
    for i in 0..max_iter {
        if x * x + y * y > 4.0 {
            return Some(i);
        }
        let t = x * x - y * y + re;
        y = 2.0 * x * y + im;
        x = t;
    }
    None
}

impl RenderSpec {
    pub fn render(&self) -> Image {
        let vp = &self.viewport;
        let (w, h) = (vp.width, vp.height);
        let mut pixels = Vec::with_capacity(3 * w as usize * h as usize);
        let cap = self.max_iter.max(1) as u64;
        for y in 0..h {
            for x in 0..w {
                let (re, im) = vp.point(x, y);
                let g = match escape_time(re, im, self.max_iter) {
                    Some(i) => (255 - 255 * (i as u64).min(cap) / cap) as u8,
                    None => 0,
                };
                pixels.extend_from_slice(&[g, g, g]);
            }
        }
        let mut marks = 0;
        for root in &self.overlay.roots {
            let (re, im) = root.value.to_c64();
            let (px, py) = vp.pixel(re, im);
            let mut touched = false;
            for yy in py - 1..=py + 1 {
                for xx in px - 1..=px + 1 {
                    if xx < 0 || yy < 0 || xx >= w as i64 || yy >= h as i64 {
                        continue;
                    }
                    let k = 3 * (yy as usize * w as usize + xx as usize);
                    pixels[k..k + 3].copy_from_slice(&MARK);
                    touched = true;
                }
            }
            marks += touched as usize;
        }
        Image { width: w, height: h, pixels, marks }
    }
}

impl Image {
    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use multequi_core::RootEntry;

    fn set(points: &[(f64, f64)]) -> RootSet {
        let roots = points
            .iter()
            .map(|&(re, im)| RootEntry { value: CFloat::new(re, im, 128), radius: 0.0, multiplicity: 1 })
            .collect::<Vec<_>>();
        RootSet { degree: roots.len(), roots, precision: 128, certified: true }
    }

    #[test]
    fn pixel_and_point_agree() {
        let vp = Viewport::new([-0.5, 0.0], 3.0, 30, 20).unwrap();
        for (x, y) in [(0, 0), (29, 19), (7, 13)] {
            let (re, im) = vp.point(x, y);
            assert_eq!(vp.pixel(re, im), (x as i64, y as i64));
        }
    }

    #[test]
    fn marks_are_red_squares() {
        let vp = Viewport::new([0.0, 0.0], 4.0, 40, 40).unwrap();
        let image = RenderSpec { viewport: vp, max_iter: 50, overlay: set(&[(-1.0, 0.0), (10.0, 10.0)]) }.render();
        assert_eq!(image.marks, 1);
        let red = image.pixels.chunks(3).filter(|p| *p == MARK).count();
        assert_eq!(red, 9);
        assert!(image.to_ppm().starts_with(b"P6\n40 40\n255\n"));
        assert_eq!(image.to_ppm().len(), 13 + 3 * 1600);
    }

    #[test]
    fn interior_is_black_and_far_field_is_bright() {
        let vp = Viewport::new([0.0, 0.0], 6.0, 3, 1).unwrap();
        let image = RenderSpec { viewport: vp, max_iter: 100, overlay: set(&[]) }.render();
        assert_eq!(&image.pixels[3..6], &[0, 0, 0]);
        assert!(image.pixels[6] > 200);
    }
}

//! Discrete convolution: integer-indexed signals, 2D images with odd-sized
//! kernels, and a cyclic DFT check of the convolution theorem.
//!
//! Images are convolved in "same" mode with zero padding. Kernels are
//! applied as true convolutions (the kernel is flipped), which only matters
//! for asymmetric kernels; the standard kernels are all symmetric.
//!
//! [`Signal1D`] is itself a semiring, so a signal whose samples are signals
//! is a 2D signal, and [`conv2d_nested`] computes image convolution as 1D
//! convolution of rows of column signals.

use std::fmt;
use std::io;
use std::path::Path;

use num_complex::Complex64;
use thiserror::Error;

use crate::algebra::{Additive, NatCount, Real64, Semiring};
use crate::par::{self, Exec};
use crate::poly::DensePoly;

#[derive(Debug, Error)]
pub enum ConvError {
    #[error("kernel dimensions must be odd, got {width}x{height}")]
    EvenKernel { width: usize, height: usize },
    #[error("image must be nonempty")]
    EmptyImage,
    #[error("pixel buffer has {got} values, expected {width}x{height}")]
    Shape {
        width: usize,
        height: usize,
        got: usize,
    },
    #[error("bad PGM data: {0}")]
    Pgm(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
}

// ---------------------------------------------------------------------------
// 1D signals

/// `f : ℤ → B`, zero outside `[offset, offset + samples.len())`.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal1D<B> {
    pub offset: i64,
    pub samples: Vec<B>,
}

impl<B: Semiring> Signal1D<B> {
    pub fn new(offset: i64, samples: Vec<B>) -> Self {
        Signal1D { offset, samples }
    }

    pub fn impulse(at: i64) -> Self {
        Signal1D::new(at, vec![B::one()])
    }

    /// `f(i)`.
    pub fn at(&self, i: i64) -> B {
        let k = i - self.offset;
        if k < 0 {
            return B::zero();
        }
        self.samples
            .get(k as usize)
            .cloned()
            .unwrap_or_else(B::zero)
    }

    /// One past the last stored index.
    pub fn end(&self) -> i64 {
        self.offset + self.samples.len() as i64
    }
}

/// Full linear convolution `(f ⊛ g)(w) = Σ_u f(u) g(w − u)`, summed in order
/// of increasing `u`.
pub fn conv1d<B: Semiring>(f: &Signal1D<B>, g: &Signal1D<B>) -> Signal1D<B> {
    if f.samples.is_empty() || g.samples.is_empty() {
        return Signal1D::new(0, Vec::new());
    }
    let (n, m) = (f.samples.len(), g.samples.len());
    let samples = (0..n + m - 1)
        .map(|w| {
            let lo = w.saturating_sub(m - 1);
            let hi = w.min(n - 1);
            (lo..=hi).fold(B::zero(), |acc, u| {
                acc.add(&f.samples[u].mul(&g.samples[w - u]))
            })
        })
        .collect();
    Signal1D::new(f.offset + g.offset, samples)
}

impl<B: Semiring> Additive for Signal1D<B> {
    fn zero() -> Self {
        Signal1D::new(0, Vec::new())
    }
    fn add(&self, other: &Self) -> Self {
        if self.samples.is_empty() {
            return other.clone();
        }
        if other.samples.is_empty() {
            return self.clone();
        }
        let lo = self.offset.min(other.offset);
        let hi = self.end().max(other.end());
        Signal1D::new(lo, (lo..hi).map(|i| self.at(i).add(&other.at(i))).collect())
    }
    fn is_zero(&self) -> bool {
        self.samples.iter().all(Additive::is_zero)
    }
}

impl<B: Semiring> Semiring for Signal1D<B> {
    fn one() -> Self {
        Signal1D::impulse(0)
    }
    fn mul(&self, other: &Self) -> Self {
        conv1d(self, other)
    }
    fn is_one(&self) -> bool {
        let mut nonzero = self
            .samples
            .iter()
            .enumerate()
            .filter(|(_, b)| !b.is_zero());
        match (nonzero.next(), nonzero.next()) {
            (Some((k, b)), None) => self.offset + k as i64 == 0 && b.is_one(),
            _ => false,
        }
    }
}

impl Signal1D<Real64> {
    pub fn from_f64(offset: i64, samples: &[f64]) -> Self {
        Signal1D::new(offset, samples.iter().copied().map(Real64).collect())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.samples.iter().map(|r| r.0).collect()
    }
}

/// Natural-number signals are dense polynomials; their convolution is the
/// same long multiplication.
pub fn nat_conv(f: &DensePoly<NatCount>, g: &DensePoly<NatCount>) -> DensePoly<NatCount> {
    f.mul(g)
}

// ---------------------------------------------------------------------------
// Images

/// Row-major grayscale image; values nominally in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageGrid {
    width: usize,
    height: usize,
    pixels: Vec<f64>,
}

impl ImageGrid {
    pub fn new(width: usize, height: usize, pixels: Vec<f64>) -> Result<Self, ConvError> {
        if pixels.len() != width * height {
            return Err(ConvError::Shape {
                width,
                height,
                got: pixels.len(),
            });
        }
        Ok(ImageGrid {
            width,
            height,
            pixels,
        })
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let pixels = (0..height)
            .flat_map(|y| (0..width).map(move |x| (x, y)))
            .map(|(x, y)| f(x, y))
            .collect();
        ImageGrid {
            width,
            height,
            pixels,
        }
    }

    pub fn constant(width: usize, height: usize, v: f64) -> Self {
        Self::from_fn(width, height, |_, _| v)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.pixels[y * self.width + x]
    }

    /// Pixel at signed coordinates; zero outside the image.
    pub fn get_padded(&self, x: i64, y: i64) -> f64 {
        if x < 0 || y < 0 || x >= self.width as i64 || y >= self.height as i64 {
            0.0
        } else {
            self.get(x as usize, y as usize)
        }
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.pixels.chunks(self.width.max(1))
    }

    /// Largest absolute pixel difference; `None` if shapes differ.
    pub fn max_abs_diff(&self, other: &Self) -> Option<f64> {
        if (self.width, self.height) != (other.width, other.height) {
            return None;
        }
        Some(
            self.pixels
                .iter()
                .zip(&other.pixels)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max),
        )
    }
}

/// Odd-sized convolution kernel anchored at its center.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel(ImageGrid);

impl Kernel {
    pub fn new(grid: ImageGrid) -> Result<Self, ConvError> {
        if grid.width.is_multiple_of(2) || grid.height.is_multiple_of(2) {
            return Err(ConvError::EvenKernel {
                width: grid.width,
                height: grid.height,
            });
        }
        Ok(Kernel(grid))
    }

    pub fn from_rows(rows: &[&[f64]]) -> Result<Self, ConvError> {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.len());
        let pixels: Vec<f64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Kernel::new(ImageGrid::new(width, height, pixels)?)
    }

    pub fn grid(&self) -> &ImageGrid {
        &self.0
    }

    fn radius(&self) -> (i64, i64) {
        ((self.0.width / 2) as i64, (self.0.height / 2) as i64)
    }

    /// Tap at offset `(dx, dy)` from the anchor.
    pub fn tap(&self, dx: i64, dy: i64) -> f64 {
        let (rx, ry) = self.radius();
        self.0.get_padded(dx + rx, dy + ry)
    }

    pub fn sum(&self) -> f64 {
        self.0.pixels.iter().sum()
    }
}

/// The fixed kernels offered by the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardKernel {
    /// Single 1 at the center.
    Identity,
    /// 3×3, every entry 1/9.
    Blur,
    /// 3×3: center 5, edge neighbors −1, corners 0.
    Sharpen,
    /// 3×3: center 8, all eight neighbors −1.
    Edge,
}

impl StandardKernel {
    pub const ALL: [StandardKernel; 4] = [
        StandardKernel::Identity,
        StandardKernel::Blur,
        StandardKernel::Sharpen,
        StandardKernel::Edge,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StandardKernel::Identity => "identity",
            StandardKernel::Blur => "blur",
            StandardKernel::Sharpen => "sharpen",
            StandardKernel::Edge => "edge",
        }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    pub fn kernel(self) -> Kernel {
        let rows: [[f64; 3]; 3] = match self {
            StandardKernel::Identity => [[0.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0]],
            StandardKernel::Blur => [[1.0 / 9.0; 3]; 3],
            StandardKernel::Sharpen => [[0.0, -1.0, 0.0], [-1.0, 5.0, -1.0], [0.0, -1.0, 0.0]],
            StandardKernel::Edge => [[-1.0, -1.0, -1.0], [-1.0, 8.0, -1.0], [-1.0, -1.0, -1.0]],
        };
        let rows: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
        Kernel::from_rows(&rows).expect("3x3 kernel")
    }
}

impl fmt::Display for StandardKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Blur, sharpen and edge kernels.
pub fn standard_kernels() -> [(StandardKernel, Kernel); 3] {
    [
        StandardKernel::Blur,
        StandardKernel::Sharpen,
        StandardKernel::Edge,
    ]
    .map(|k| (k, k.kernel()))
}

/// Same-size zero-padded convolution, rows computed in parallel when the
/// `parallel` feature is on.
pub fn conv2d(img: &ImageGrid, k: &Kernel) -> Result<ImageGrid, ConvError> {
    conv2d_with(Exec::Parallel, img, k)
}

/// [`conv2d`] with an explicit execution mode. Every pixel is summed in the
/// same tap order in either mode, so the results are bit-identical.
pub fn conv2d_with(exec: Exec, img: &ImageGrid, k: &Kernel) -> Result<ImageGrid, ConvError> {
    if img.pixels.is_empty() {
        return Err(ConvError::EmptyImage);
    }
    let (rx, ry) = k.radius();
    let w = img.width;
    let rows = par::map_range(exec, img.height, |y| {
        (0..w)
            .map(|x| {
                let mut acc = 0.0;
                for dy in -ry..=ry {
                    for dx in -rx..=rx {
                        let v = img.get_padded(x as i64 + dx, y as i64 + dy);
                        acc += v * k.tap(-dx, -dy);
                    }
                }
                acc
            })
            .collect::<Vec<f64>>()
    });
    ImageGrid::new(w, img.height, rows.concat())
}

type Grid2 = Signal1D<Signal1D<Real64>>;

fn to_nested(g: &ImageGrid, x0: i64, y0: i64) -> Grid2 {
    Signal1D::new(y0, g.rows().map(|r| Signal1D::from_f64(x0, r)).collect())
}

/// Image convolution as 1D convolution of rows whose samples are column
/// signals, cropped back to the image.
pub fn conv2d_nested(img: &ImageGrid, k: &Kernel) -> Result<ImageGrid, ConvError> {
    if img.pixels.is_empty() {
        return Err(ConvError::EmptyImage);
    }
    let (rx, ry) = k.radius();
    let full = conv1d(&to_nested(img, 0, 0), &to_nested(&k.0, -rx, -ry));
    Ok(ImageGrid::from_fn(img.width, img.height, |x, y| {
        full.at(y as i64).at(x as i64).0
    }))
}

// ---------------------------------------------------------------------------
// PGM

/// Read a P2 (ASCII) or P5 (binary) graymap; samples become `v / maxval`.
pub fn read_pgm(bytes: &[u8]) -> Result<ImageGrid, ConvError> {
    let bad = |m: &str| ConvError::Pgm(m.to_string());
    let mut pos = 0;
    let token = |pos: &mut usize| -> Result<String, ConvError> {
        loop {
            match bytes.get(*pos) {
                Some(b'#') => {
                    while bytes.get(*pos).is_some_and(|&b| b != b'\n') {
                        *pos += 1;
                    }
                }
                Some(b) if b.is_ascii_whitespace() => *pos += 1,
                Some(_) => break,
                None => return Err(bad("truncated header")),
            }
        }
        let start = *pos;
        while bytes
            .get(*pos)
            .is_some_and(|b| !b.is_ascii_whitespace() && *b != b'#')
        {
            *pos += 1;
        }
        Ok(String::from_utf8_lossy(&bytes[start..*pos]).into_owned())
    };
    let magic = token(&mut pos)?;
    let number = |s: String, what: &str| -> Result<usize, ConvError> {
        s.parse::<usize>()
            .map_err(|_| ConvError::Pgm(format!("bad {what} {s:?}")))
    };
    let width = number(token(&mut pos)?, "width")?;
    let height = number(token(&mut pos)?, "height")?;
    let maxval = number(token(&mut pos)?, "maxval")?;
    if maxval == 0 || maxval > 65535 {
        return Err(bad("maxval must be in 1..=65535"));
    }
    let count = width * height;
    let samples: Vec<usize> = match magic.as_str() {
        "P2" => {
            let mut out = Vec::with_capacity(count);
            for _ in 0..count {
                out.push(number(token(&mut pos)?, "sample")?);
            }
            out
        }
        "P5" => {
            if maxval > 255 {
                return Err(bad("binary PGM with maxval above 255 is not supported"));
            }
            // Exactly one whitespace byte separates the header from the raster.
            pos += 1;
            let raster = bytes
                .get(pos..pos + count)
                .ok_or_else(|| bad("truncated raster"))?;
            raster.iter().map(|&b| b as usize).collect()
        }
        other => return Err(ConvError::Pgm(format!("unknown magic {other:?}"))),
    };
    if samples.iter().any(|&s| s > maxval) {
        return Err(bad("sample exceeds maxval"));
    }
    let m = maxval as f64;
    ImageGrid::new(
        width,
        height,
        samples.iter().map(|&s| s as f64 / m).collect(),
    )
}

/// Quantize a pixel for an 8-bit graymap.
pub fn to_byte(v: f64) -> u8 {
    (v.clamp(0.0, 1.0) * 255.0).round() as u8
}

/// Binary P5 at maxval 255.
pub fn write_pgm(img: &ImageGrid) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width, img.height).into_bytes();
    out.extend(img.pixels.iter().map(|&v| to_byte(v)));
    out
}

pub fn load_pgm(path: &Path) -> Result<ImageGrid, ConvError> {
    let bytes = std::fs::read(path).map_err(|source| ConvError::Io {
        path: path.display().to_string(),
        source,
    })?;
    read_pgm(&bytes)
}

pub fn save_pgm(path: &Path, img: &ImageGrid) -> Result<(), ConvError> {
    std::fs::write(path, write_pgm(img)).map_err(|source| ConvError::Io {
        path: path.display().to_string(),
        source,
    })
}

// ---------------------------------------------------------------------------
// Convolution theorem

/// Fold a signal starting at index 0 onto `ℤ_n`.
fn embed(f: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n];
    for (i, v) in f.iter().enumerate() {
        out[i % n] += v;
    }
    out
}

/// Cyclic convolution over `ℤ_n` by the defining sum.
pub fn cyclic_conv(f: &[f64], g: &[f64], n: usize) -> Vec<f64> {
    let (f, g) = (embed(f, n), embed(g, n));
    (0..n)
        .map(|k| (0..n).map(|j| f[j] * g[(k + n - j) % n]).sum())
        .collect()
}

/// Naive `O(n²)` discrete Fourier transform; `inverse` includes the `1/n`.
pub fn dft(x: &[Complex64], inverse: bool) -> Vec<Complex64> {
    let n = x.len();
    let sign = if inverse { 1.0 } else { -1.0 };
    let scale = if inverse { 1.0 / n as f64 } else { 1.0 };
    (0..n)
        .map(|k| {
            let s: Complex64 = x
                .iter()
                .enumerate()
                .map(|(j, v)| {
                    let theta = sign * 2.0 * std::f64::consts::PI * ((j * k) % n) as f64 / n as f64;
                    v * Complex64::from_polar(1.0, theta)
                })
                .sum();
            s * scale
        })
        .collect()
}

/// Cyclic convolution through the frequency domain.
pub fn cyclic_conv_dft(f: &[f64], g: &[f64], n: usize) -> Vec<f64> {
    let lift = |v: Vec<f64>| {
        v.into_iter()
            .map(|r| Complex64::new(r, 0.0))
            .collect::<Vec<_>>()
    };
    let fh = dft(&lift(embed(f, n)), false);
    let gh = dft(&lift(embed(g, n)), false);
    let prod: Vec<Complex64> = fh.iter().zip(&gh).map(|(a, b)| a * b).collect();
    dft(&prod, true).iter().map(|c| c.re).collect()
}

/// Absolute per-sample tolerance of [`dft_check`].
pub const DFT_TOL: f64 = 1e-9;

/// Whether the direct and DFT-based cyclic convolutions of `f` and `g`
/// (both starting at index 0) agree within [`DFT_TOL`] at every sample.
pub fn dft_check(f: &[f64], g: &[f64], n: usize) -> bool {
    if n == 0 {
        return f.is_empty() && g.is_empty();
    }
    let direct = cyclic_conv(f, g, n);
    let spectral = cyclic_conv_dft(f, g, n);
    direct
        .iter()
        .zip(&spectral)
        .all(|(a, b)| (a - b).abs() <= DFT_TOL)
}

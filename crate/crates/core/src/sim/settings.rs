//! The twelve dependence settings.
//!
//! Every setting draws `x` in `p` dimensions and a scalar `y`. Most act on
//! the projection `w'x` with weights `w_d = 1/d`, so the first coordinates
//! carry most of the signal as `p` grows. `noise` scales the additive noise.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};

use crate::data::DataMatrix;
use crate::error::{invalid, Error, Result};
use crate::rng::{stream, StreamRng};

use super::noise::default_noise;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Setting {
    Linear,
    Cubic,
    Exponential,
    Step,
    Quadratic,
    WShape,
    Spiral,
    Bernoulli,
    FourthRoot,
    TwoParabolas,
    Circle,
    Ellipse,
}

impl Setting {
    pub const ALL: [Setting; 12] = [
        Setting::Linear,
        Setting::Cubic,
        Setting::Exponential,
        Setting::Step,
        Setting::Quadratic,
        Setting::WShape,
        Setting::Spiral,
        Setting::Bernoulli,
        Setting::FourthRoot,
        Setting::TwoParabolas,
        Setting::Circle,
        Setting::Ellipse,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Setting::Linear => "linear",
            Setting::Cubic => "cubic",
            Setting::Exponential => "exponential",
            Setting::Step => "step",
            Setting::Quadratic => "quadratic",
            Setting::WShape => "wshape",
            Setting::Spiral => "spiral",
            Setting::Bernoulli => "bernoulli",
            Setting::FourthRoot => "fourthroot",
            Setting::TwoParabolas => "twoparabolas",
            Setting::Circle => "circle",
            Setting::Ellipse => "ellipse",
        }
    }

    /// Position in [`Setting::ALL`].
    pub fn index(self) -> usize {
        Setting::ALL.iter().position(|&s| s == self).unwrap()
    }
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Setting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Setting::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::Unknown {
                kind: "setting",
                name: s.to_string(),
            })
    }
}

/// A setting at a given dimension and noise level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimSetting {
    pub setting: Setting,
    pub p: usize,
    pub noise: f64,
}

impl SimSetting {
    /// `setting` in `p` dimensions at its default noise, see [`default_noise`].
    pub fn new(setting: Setting, p: usize) -> Result<Self> {
        Self::with_noise(setting, p, default_noise(setting, p))
    }

    pub fn with_noise(setting: Setting, p: usize, noise: f64) -> Result<Self> {
        if p == 0 {
            return Err(invalid("p", "must be at least 1"));
        }
        if !(noise >= 0.0 && noise.is_finite()) {
            return Err(invalid(
                "noise",
                format!("{noise} must be finite and nonnegative"),
            ));
        }
        Ok(Self { setting, p, noise })
    }
}

/// Draw `n` pairs. With `dependent = false`, `x` and `y` come from two
/// independent draws of the same joint, which keeps both marginals and
/// removes the dependence.
pub fn generate(
    sim: &SimSetting,
    n: usize,
    dependent: bool,
    seed: u64,
) -> Result<(DataMatrix, DataMatrix)> {
    if n < 2 {
        return Err(Error::TooFewRows { min: 2, got: n });
    }
    if dependent {
        let (x, y) = draw(sim, n, &mut stream(seed, &[0]));
        Ok((DataMatrix::new(n, sim.p, x)?, DataMatrix::column(y)?))
    } else {
        let (x, _) = draw(sim, n, &mut stream(seed, &[1]));
        let (_, y) = draw(sim, n, &mut stream(seed, &[2]));
        Ok((DataMatrix::new(n, sim.p, x)?, DataMatrix::column(y)?))
    }
}

fn weighted(x: &[f64]) -> f64 {
    x.iter().enumerate().map(|(d, v)| v / (d + 1) as f64).sum()
}

fn gauss(rng: &mut StreamRng) -> f64 {
    StandardNormal.sample(rng)
}

/// Row-major `x` (n by p) and `y`.
fn draw(sim: &SimSetting, n: usize, rng: &mut StreamRng) -> (Vec<f64>, Vec<f64>) {
    let p = sim.p;
    let k = sim.noise;
    let sym = Uniform::new(-1.0, 1.0).unwrap();
    let mut xs = Vec::with_capacity(n * p);
    let mut ys = Vec::with_capacity(n);
    let mut row = vec![0.0; p];

    for _ in 0..n {
        let y = match sim.setting {
            Setting::Linear => {
                row.iter_mut().for_each(|v| *v = sym.sample(rng));
                weighted(&row) + k * gauss(rng)
            }
            Setting::Cubic => {
                row.iter_mut().for_each(|v| *v = sym.sample(rng));
                let z = weighted(&row) - 1.0 / 3.0;
                128.0 * z.powi(3) + 48.0 * z * z - 12.0 * z + 80.0 * k * gauss(rng)
            }
            Setting::Exponential => {
                let u = Uniform::new(0.0, 3.0).unwrap();
                row.iter_mut().for_each(|v| *v = u.sample(rng));
                weighted(&row).exp() + 10.0 * k * gauss(rng)
            }
            Setting::Step => {
                row.iter_mut().for_each(|v| *v = sym.sample(rng));
                f64::from(u8::from(weighted(&row) > 0.0)) + k * gauss(rng)
            }
            Setting::Quadratic => {
                row.iter_mut().for_each(|v| *v = sym.sample(rng));
                weighted(&row).powi(2) + 0.5 * k * gauss(rng)
            }
            Setting::WShape => {
                row.iter_mut().for_each(|v| *v = sym.sample(rng));
                let wx = weighted(&row);
                let wu = weighted(&(0..p).map(|_| sym.sample(rng)).collect::<Vec<_>>());
                4.0 * ((wx * wx - 0.5).powi(2) + wu / 500.0) + 0.5 * k * gauss(rng)
            }
            Setting::Spiral => {
                let u: f64 = rng.random_range(0.0..5.0);
                let (s, c) = (PI * u).sin_cos();
                // (x, y) on the sphere of radius u, every angle equal to pi*u
                let mut lead = u * c;
                for v in row.iter_mut().take(p - 1) {
                    *v = lead * s;
                    lead *= c;
                }
                row[p - 1] = lead;
                u * s + 0.4 * k * gauss(rng)
            }
            Setting::Bernoulli => {
                for v in row.iter_mut() {
                    *v = f64::from(u8::from(rng.random_bool(0.5))) + 0.5 * k * gauss(rng);
                }
                let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                sign * weighted(&row) + 0.5 * k * gauss(rng)
            }
            Setting::FourthRoot => {
                row.iter_mut().for_each(|v| *v = sym.sample(rng));
                weighted(&row).abs().powf(0.25) + k / 4.0 * gauss(rng)
            }
            Setting::TwoParabolas => {
                row.iter_mut().for_each(|v| *v = sym.sample(rng));
                let v = f64::from(u8::from(rng.random_bool(0.5)));
                let jitter: f64 = rng.random();
                (weighted(&row).powi(2) + 2.0 * k * jitter) * (v - 0.5)
            }
            Setting::Circle | Setting::Ellipse => {
                let radius = if sim.setting == Setting::Circle {
                    1.0
                } else {
                    5.0
                };
                let mut first = 0.0;
                for (d, v) in row.iter_mut().enumerate() {
                    let u: f64 = sym.sample(rng);
                    if d == 0 {
                        first = u;
                    }
                    *v = radius * (PI * u).cos() + k / 4.0 * gauss(rng);
                }
                radius * (PI * first).sin() + k / 4.0 * gauss(rng)
            }
        };
        xs.extend_from_slice(&row);
        ys.push(y);
    }
    (xs, ys)
}

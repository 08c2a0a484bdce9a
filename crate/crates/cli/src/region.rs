//! `region` subcommand: classify a 2-D grid through `(s, p)` space.
//!
//! A slice is a comma-separated list of `key=value` or `key=lo:hi`, with
//! keys `s_re, s_im, s_abs, s_arg, p_re, p_im, p_abs, p_arg`. Exactly two
//! keys take ranges. Each of `s`, `p` is given in Cartesian or in polar
//! form, not both; unset coordinates are 0. Rows run over the first range
//! (outer) and then the second.

use std::io::Write;

use symdisc::geometry::{classify, in_half_gamma, PointPair, Region};
use symdisc::linalg::c64;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Value {
    Fixed(f64),
    Range(f64, f64),
}

const KEYS: [&str; 8] = ["s_re", "s_im", "s_abs", "s_arg", "p_re", "p_im", "p_abs", "p_arg"];

#[derive(Debug, Clone, PartialEq)]
pub struct Slice {
    values: [Option<Value>; 8],
    axes: [usize; 2],
}

impl Slice {
    pub fn parse(spec: &str) -> Result<Self, String> {
        let mut values = [None; 8];
        let mut axes = Vec::new();
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part.split_once('=').ok_or_else(|| format!("expected key=value, got `{part}`"))?;
            let idx =
                KEYS.iter().position(|k| *k == key.trim()).ok_or_else(|| format!("unknown coordinate `{key}`"))?;
            if values[idx].is_some() {
                return Err(format!("`{key}` given twice"));
            }
            let number =
                |x: &str| x.trim().parse::<f64>().ok().filter(|v| v.is_finite()).ok_or(format!("bad number `{x}`"));
            let v = match value.split_once(':') {
                Some((lo, hi)) => {
                    axes.push(idx);
                    Value::Range(number(lo)?, number(hi)?)
                }
                None => Value::Fixed(number(value)?),
            };
            values[idx] = Some(v);
        }
        if axes.len() != 2 {
            return Err(format!("need exactly two ranged coordinates, got {}", axes.len()));
        }
        for base in [0, 4] {
            let cartesian = values[base].is_some() || values[base + 1].is_some();
            let polar = values[base + 2].is_some() || values[base + 3].is_some();
            if cartesian && polar {
                return Err(format!("`{}` mixes Cartesian and polar coordinates", &KEYS[base][..1]));
            }
        }
        Ok(Self { values, axes: [axes[0], axes[1]] })
    }

    fn point(&self, coords: &[f64; 8]) -> PointPair {
        let pick = |base: usize| {
            if self.values[base + 2].is_some() || self.values[base + 3].is_some() {
                c64(coords[base + 2], 0.0) * c64(0.0, coords[base + 3]).exp()
            } else {
                c64(coords[base], coords[base + 1])
            }
        };
        PointPair::new(pick(0), pick(4))
    }

    /// Grid points in output order.
    pub fn points(&self, n: usize) -> Vec<PointPair> {
        let mut base = [0.0; 8];
        for (i, v) in self.values.iter().enumerate() {
            if let Some(Value::Fixed(x)) = v {
                base[i] = *x;
            }
        }
        let at = |axis: usize, k: usize| match self.values[axis] {
            Some(Value::Range(lo, hi)) => lo + (hi - lo) * k as f64 / (n - 1) as f64,
            _ => unreachable!("axes are ranges"),
        };
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut c = base;
                c[self.axes[0]] = at(self.axes[0], i);
                c[self.axes[1]] = at(self.axes[1], j);
                out.push(self.point(&c));
            }
        }
        out
    }
}

fn label(pt: PointPair, half: bool) -> &'static str {
    if half {
        return if in_half_gamma(pt) { "HALF_GAMMA" } else { "OUTSIDE_HALF_GAMMA" };
    }
    match classify(pt).region {
        Region::OpenG => "OPEN_G",
        Region::DistBoundary => "DIST_BOUNDARY",
        Region::GammaNotB => "GAMMA_NOT_B",
        Region::Outside => "OUTSIDE",
    }
}

/// Writes the CSV and returns the number of rows.
pub fn write_csv(out: impl Write, slice: &Slice, n: usize, half: bool) -> csv::Result<usize> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["s_re", "s_im", "p_re", "p_im", "region"])?;
    let points = slice.points(n);
    for pt in &points {
        let fields = [pt.s.re, pt.s.im, pt.p.re, pt.p.im].map(|x| x.to_string());
        w.write_record(fields.iter().map(String::as_str).chain([label(*pt, half)]))?;
    }
    w.flush()?;
    Ok(points.len())
}

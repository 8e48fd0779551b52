//! Sweep grids: `name=lo:hi:count`, `name=lo:hi@step`, `name=v1,v2,…` or a
//! single value. Endpoints are parsed exactly so `0.5:3:6` yields
//! `1/2, 1, 3/2, …` without rounding drift.

use std::fmt;

use anyhow::{anyhow, bail, Context, Result};
use nkh_core::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub name: String,
    /// Exact literals, ready for `Scalar::parse` in either backend.
    pub values: Vec<String>,
}

#[derive(Debug)]
pub struct GridTooLarge {
    pub points: u128,
    pub cap: usize,
}

impl fmt::Display for GridTooLarge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "grid has {} points, above the cap of {}", self.points, self.cap)
    }
}

impl std::error::Error for GridTooLarge {}

fn exact(text: &str) -> Result<Scalar> {
    Scalar::parse_exact(text).with_context(|| format!("bad number {text:?}"))
}

pub fn parse_axis(spec: &str) -> Result<Axis> {
    let (name, range) = spec
        .split_once('=')
        .ok_or_else(|| anyhow!("grid spec {spec:?} is not name=range"))?;
    let name = name.trim().to_string();
    let range = range.trim();
    let values = if let Some((bounds, step)) = range.split_once('@') {
        let (lo, hi) = bounds
            .split_once(':')
            .ok_or_else(|| anyhow!("{spec:?}: expected lo:hi@step"))?;
        let (lo, hi, step) = (exact(lo)?, exact(hi)?, exact(step)?);
        if !step.is_positive() {
            bail!("{spec:?}: step must be positive");
        }
        let mut out = Vec::new();
        let mut x = lo;
        while x <= hi {
            out.push(x.to_string());
            x = &x + &step;
            if out.len() > 10_000_000 {
                bail!("{spec:?}: too many steps");
            }
        }
        out
    } else if range.matches(':').count() == 2 {
        let parts: Vec<&str> = range.split(':').collect();
        let (lo, hi) = (exact(parts[0])?, exact(parts[1])?);
        let count: usize = parts[2]
            .trim()
            .parse()
            .with_context(|| format!("{spec:?}: count must be a positive integer"))?;
        match count {
            0 => bail!("{spec:?}: count must be positive"),
            1 => vec![lo.to_string()],
            n => {
                let step = &(&hi - &lo) / &Scalar::int(n as i64 - 1);
                (0..n)
                    .map(|i| (&lo + &(&step * &Scalar::int(i as i64))).to_string())
                    .collect()
            }
        }
    } else {
        range.split(',').map(|v| v.trim().to_string()).collect()
    };
    if values.is_empty() || values.iter().any(String::is_empty) {
        bail!("{spec:?}: empty range");
    }
    Ok(Axis { name, values })
}

/// Cartesian product in axis order, last axis fastest.
pub fn points(axes: &[Axis], cap: usize) -> Result<Vec<Vec<(String, String)>>> {
    let total = axes.iter().map(|a| a.values.len() as u128).product::<u128>();
    if total > cap as u128 {
        return Err(GridTooLarge { points: total, cap }.into());
    }
    let mut out: Vec<Vec<(String, String)>> = vec![Vec::new()];
    for axis in axes {
        out = out
            .into_iter()
            .flat_map(|p| {
                axis.values.iter().map(move |v| {
                    let mut q = p.clone();
                    q.push((axis.name.clone(), v.clone()));
                    q
                })
            })
            .collect();
    }
    Ok(out)
}

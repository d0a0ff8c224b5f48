use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};

use ndarray::{Array2, ArrayView1};
use serde::{Deserialize, Serialize};

use super::{sample_vectors, Distribution, LinkFunction, Signal};
use crate::error::{invalid, Error, Result};
use crate::rng::{stream, stream_rng};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasurementMeta {
    /// `None` when the sampling vectors were supplied by the caller.
    pub distribution: Option<Distribution>,
    pub link: String,
    pub seed: u64,
    pub m: usize,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_star: Option<Signal>,
}

/// Sampling vectors (rows of `a`) and responses `y`.
#[derive(Debug, Clone)]
pub struct MeasurementSet {
    a: Array2<f64>,
    y: Vec<f64>,
    pub meta: MeasurementMeta,
}

impl MeasurementSet {
    pub fn new(a: Array2<f64>, y: Vec<f64>, meta: MeasurementMeta) -> Result<Self> {
        if a.nrows() != y.len() {
            return Err(Error::DimensionMismatch {
                expected: a.nrows(),
                got: y.len(),
            });
        }
        if a.nrows() == 0 || a.ncols() == 0 {
            return invalid("measurement set needs at least one row and one column");
        }
        if a.iter().chain(&y).any(|v| !v.is_finite()) {
            return invalid("measurement set contains non-finite values");
        }
        Ok(Self { a, y, meta })
    }

    pub fn m(&self) -> usize {
        self.a.nrows()
    }

    pub fn n(&self) -> usize {
        self.a.ncols()
    }

    pub fn vectors(&self) -> &Array2<f64> {
        &self.a
    }

    pub fn responses(&self) -> &[f64] {
        &self.y
    }

    fn paths(dir: &Path, stem: &str) -> (PathBuf, PathBuf, PathBuf) {
        (
            dir.join(format!("{stem}_a.csv")),
            dir.join(format!("{stem}_y.csv")),
            dir.join(format!("{stem}_meta.json")),
        )
    }

    /// Writes `<stem>_a.csv` (row-major, one sampling vector per line),
    /// `<stem>_y.csv` (one response per line) and `<stem>_meta.json`.
    /// Floats use the shortest representation that round-trips.
    pub fn write(&self, dir: &Path, stem: &str) -> Result<()> {
        let (a_path, y_path, meta_path) = Self::paths(dir, stem);
        let mut w = csv::WriterBuilder::new()
            .has_headers(false)
            .from_path(&a_path)?;
        for row in self.a.rows() {
            w.write_record(row.iter().map(f64::to_string))?;
        }
        w.flush()?;
        let mut w = csv::WriterBuilder::new()
            .has_headers(false)
            .from_path(&y_path)?;
        for v in &self.y {
            w.write_record([v.to_string()])?;
        }
        w.flush()?;
        serde_json::to_writer_pretty(BufWriter::new(File::create(meta_path)?), &self.meta)?;
        Ok(())
    }

    pub fn read(dir: &Path, stem: &str) -> Result<Self> {
        let (a_path, y_path, meta_path) = Self::paths(dir, stem);
        let meta: MeasurementMeta =
            serde_json::from_reader(BufReader::new(File::open(meta_path)?))?;
        let parse = |s: &str| -> Result<f64> {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidArgument(format!("bad float '{s}'")))
        };
        let mut flat = Vec::with_capacity(meta.m * meta.n);
        let mut rows = 0;
        let mut r = csv::ReaderBuilder::new()
            .has_headers(false)
            .from_path(&a_path)?;
        for record in r.records() {
            let record = record?;
            if record.len() != meta.n {
                return Err(Error::DimensionMismatch {
                    expected: meta.n,
                    got: record.len(),
                });
            }
            for field in record.iter() {
                flat.push(parse(field)?);
            }
            rows += 1;
        }
        let mut y = Vec::with_capacity(rows);
        let mut r = csv::ReaderBuilder::new()
            .has_headers(false)
            .from_path(&y_path)?;
        for record in r.records() {
            y.push(parse(&record?[0])?);
        }
        if rows != meta.m {
            return Err(Error::DimensionMismatch {
                expected: meta.m,
                got: rows,
            });
        }
        let a = Array2::from_shape_vec((rows, meta.n), flat)
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
        Self::new(a, y, meta)
    }
}

fn dot(row: ArrayView1<'_, f64>, x: &[f64]) -> f64 {
    row.iter().zip(x).map(|(a, b)| a * b).sum()
}

/// Applies `link` to `⟨aᵢ, x*⟩` for caller-supplied sampling vectors. Noise
/// comes from the noise stream of `seed`.
pub fn measure(
    a: Array2<f64>,
    x_star: &Signal,
    link: &LinkFunction,
    seed: u64,
) -> Result<MeasurementSet> {
    if a.ncols() != x_star.dim() {
        return Err(Error::DimensionMismatch {
            expected: x_star.dim(),
            got: a.ncols(),
        });
    }
    let mut rng = stream_rng(seed, stream::NOISE);
    let y = a
        .rows()
        .into_iter()
        .map(|row| link.sample(dot(row, x_star.values()), &mut rng))
        .collect();
    let meta = MeasurementMeta {
        distribution: None,
        link: link.tag(),
        seed,
        m: a.nrows(),
        n: a.ncols(),
        x_star: Some(x_star.clone()),
    };
    MeasurementSet::new(a, y, meta)
}

/// Draws `m` sampling vectors from `dist` and measures `x_star` through `link`.
pub fn generate(
    x_star: &Signal,
    dist: &Distribution,
    link: &LinkFunction,
    m: usize,
    seed: u64,
) -> Result<MeasurementSet> {
    let a = sample_vectors(dist, m, x_star.dim(), seed)?;
    let mut set = measure(a, x_star, link, seed)?;
    set.meta.distribution = Some(dist.clone());
    Ok(set)
}

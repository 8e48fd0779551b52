//! Plain-text structure-constant format.
//!
//! ```text
//! # comment
//! name su2
//! dim 3
//! h_indices
//! m_blocks a:0,1,2
//! 1 2 0 -1
//! 2 0 1 -1
//! 0 1 2 -1
//! ```
//!
//! `i j k value` lines give `c[i][j][k]`, `[bᵢ,bⱼ] = Σ c[i][j][k] bₖ`; the
//! antisymmetric partner is implied. `m_blocks` lists basis indices per block
//! and fixes the order of `m`; without it `m` is the complement of `h` in
//! increasing order. `metric a b v` entries are on `m` positions (symmetric
//! completion, identity when absent); `acs a b v` sets `J[a][b]`.

use crate::exactnum::{Backend, Matrix, Scalar};

use super::{
    HomogError, HomogeneousModel, InvariantAcs, InvariantMetric, LieAlgebraData, ReductiveSplit,
};

/// Raw contents of a model file before validation.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ModelFile {
    pub name: Option<String>,
    pub dim: usize,
    pub h: Vec<usize>,
    pub blocks: Vec<(String, Vec<usize>)>,
    pub constants: Vec<(usize, usize, usize, Scalar)>,
    pub metric: Vec<(usize, usize, Scalar)>,
    pub acs: Vec<(usize, usize, Scalar)>,
}

fn idx(tok: &str, line: usize) -> Result<usize, HomogError> {
    tok.parse()
        .map_err(|_| HomogError::Parse(line, format!("bad index {tok:?}")))
}

fn val(tok: &str, line: usize) -> Result<Scalar, HomogError> {
    Scalar::parse_exact(tok).map_err(|e| HomogError::Parse(line, e.to_string()))
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<ModelFile, HomogError> {
        let mut f = ModelFile::default();
        let mut have_dim = false;
        for (no, raw) in text.lines().enumerate() {
            let line = no + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let toks: Vec<&str> = content.split_whitespace().collect();
            match toks[0] {
                "name" => f.name = Some(toks[1..].join(" ")),
                "dim" => {
                    if toks.len() != 2 {
                        return Err(HomogError::Parse(line, "dim takes one value".into()));
                    }
                    f.dim = idx(toks[1], line)?;
                    have_dim = true;
                }
                "h_indices" => {
                    f.h = toks[1..].iter().map(|t| idx(t, line)).collect::<Result<_, _>>()?;
                }
                "m_blocks" => {
                    for spec in &toks[1..] {
                        let (label, list) = spec.split_once(':').ok_or_else(|| {
                            HomogError::Parse(line, format!("block {spec:?} needs label:i,j,..."))
                        })?;
                        let members = list
                            .split(',')
                            .filter(|s| !s.is_empty())
                            .map(|t| idx(t, line))
                            .collect::<Result<Vec<_>, _>>()?;
                        f.blocks.push((label.to_string(), members));
                    }
                }
                "metric" | "acs" => {
                    if toks.len() != 4 {
                        return Err(HomogError::Parse(line, format!("{} takes a b value", toks[0])));
                    }
                    let entry = (idx(toks[1], line)?, idx(toks[2], line)?, val(toks[3], line)?);
                    if toks[0] == "metric" {
                        f.metric.push(entry);
                    } else {
                        f.acs.push(entry);
                    }
                }
                _ => {
                    if toks.len() != 4 {
                        return Err(HomogError::Parse(line, format!("unrecognized line {content:?}")));
                    }
                    f.constants.push((
                        idx(toks[0], line)?,
                        idx(toks[1], line)?,
                        idx(toks[2], line)?,
                        val(toks[3], line)?,
                    ));
                }
            }
        }
        if !have_dim {
            return Err(HomogError::Parse(0, "missing dim".into()));
        }
        Ok(f)
    }

    fn backend(&self) -> Result<Backend, HomogError> {
        let mut b = Backend::Rational;
        let all = self
            .constants
            .iter()
            .map(|e| &e.3)
            .chain(self.metric.iter().map(|e| &e.2))
            .chain(self.acs.iter().map(|e| &e.2));
        for v in all {
            b = b.join(v.backend())?;
        }
        Ok(b)
    }

    /// Validate into a model.
    pub fn build(&self) -> Result<HomogeneousModel, HomogError> {
        let backend = self.backend()?;
        let lie = LieAlgebraData::from_entries(self.dim, backend, &self.constants)?;
        let (m, blocks) = if self.blocks.is_empty() {
            let m: Vec<usize> = (0..self.dim).filter(|i| !self.h.contains(i)).collect();
            (m, Vec::new())
        } else {
            let mut m = Vec::new();
            let mut blocks = Vec::new();
            for (label, members) in &self.blocks {
                let start = m.len();
                m.extend(members.iter().copied());
                blocks.push((label.clone(), (start..m.len()).collect()));
            }
            (m, blocks)
        };
        let split = ReductiveSplit::new(&lie, self.h.clone(), m, blocks)?;
        let md = split.m_dim();
        let mut g = Matrix::identity(md, backend);
        if !self.metric.is_empty() {
            g = Matrix::zeros(md, md, backend);
            for (a, b, v) in &self.metric {
                if *a >= md || *b >= md {
                    return Err(HomogError::Parse(0, format!("metric entry ({a},{b}) out of range")));
                }
                g[(*a, *b)] = v.to_backend(backend)?;
                g[(*b, *a)] = v.to_backend(backend)?;
            }
        }
        let metric = InvariantMetric::new(g)?;
        let acs = if self.acs.is_empty() {
            None
        } else {
            let mut j = Matrix::zeros(md, md, backend);
            for (a, b, v) in &self.acs {
                if *a >= md || *b >= md {
                    return Err(HomogError::Parse(0, format!("acs entry ({a},{b}) out of range")));
                }
                j[(*a, *b)] = v.to_backend(backend)?;
            }
            Some(InvariantAcs::new(j, &metric)?)
        };
        let name = self.name.clone().unwrap_or_else(|| "custom".to_string());
        HomogeneousModel::new(name, lie, split, metric, acs)
    }
}

/// Parse and validate a model file.
pub fn parse_model_file(text: &str) -> Result<HomogeneousModel, HomogError> {
    ModelFile::parse(text)?.build()
}

/// Render an exact model in the file format (inverse of [`parse_model_file`]).
pub fn render_model_file(model: &HomogeneousModel) -> String {
    let mut out = String::new();
    let split = model.split();
    out.push_str(&format!("name {}\n", model.name()));
    out.push_str(&format!("dim {}\n", model.lie().dim()));
    let h: Vec<String> = split.h().iter().map(|i| i.to_string()).collect();
    out.push_str(format!("h_indices {}\n", h.join(" ")).trim_end());
    out.push('\n');
    let blocks: Vec<(String, Vec<usize>)> = if split.blocks().is_empty() {
        vec![("m".to_string(), (0..split.m_dim()).collect())]
    } else {
        split.blocks().to_vec()
    };
    let specs: Vec<String> = blocks
        .iter()
        .map(|(label, pos)| {
            let ids: Vec<String> = pos.iter().map(|&p| split.m()[p].to_string()).collect();
            format!("{label}:{}", ids.join(","))
        })
        .collect();
    // block order defines m order; positions must be listed in m order
    out.push_str(&format!("m_blocks {}\n", specs.join(" ")));
    for (i, j, k, v) in model.lie().sparse_entries() {
        out.push_str(&format!("{i} {j} {k} {v}\n"));
    }
    let g = model.metric().matrix();
    let md = split.m_dim();
    for a in 0..md {
        for b in a..md {
            if !g[(a, b)].is_zero() {
                out.push_str(&format!("metric {a} {b} {}\n", g[(a, b)]));
            }
        }
    }
    if let Some(j) = model.acs() {
        for a in 0..md {
            for b in 0..md {
                let v = &j.matrix()[(a, b)];
                if !v.is_zero() {
                    out.push_str(&format!("acs {a} {b} {v}\n"));
                }
            }
        }
    }
    out
}

use crate::error::{Error, Result};
use crate::interpolation::PointSet;
use crate::numerics::Scalar;

/// Terms with `log a_l` below `-LINEAR_LOG_FLOOR` are never materialised in linear scale.
pub const LINEAR_LOG_FLOOR: f64 = 1_099_511_627_776.0; // 2^40

/// Catalog of decreasing null sequences `a_l`.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    /// `a_l = log(l+1)^alpha / l^beta`
    PowerLog { alpha: f64, beta: f64 },
    /// `a_l = exp(-l^alpha)`
    ExpPower { alpha: f64 },
    /// `a_l = 1 / log(l+1)^alpha`
    InvLog { alpha: f64 },
    /// `a_l = exp(-l!)`
    ExpFactorial,
    /// `a_l = exp(-p^l)`
    ExpGeometric { p: f64 },
    /// Clusters `1/k + j exp(-k)`, `0 <= j <= k`.
    AlmostAccumulation,
    /// Caller-supplied `log a_l`, strictly decreasing.
    Custom { log_values: Vec<Scalar> },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::PowerLog { .. } => "power-log",
            Family::ExpPower { .. } => "exp-power",
            Family::InvLog { .. } => "inv-log",
            Family::ExpFactorial => "exp-factorial",
            Family::ExpGeometric { .. } => "exp-geometric",
            Family::AlmostAccumulation => "almost-accumulation",
            Family::Custom { .. } => "custom",
        }
    }

    pub fn parameters(&self) -> Vec<(&'static str, f64)> {
        match self {
            Family::PowerLog { alpha, beta } => vec![("alpha", *alpha), ("beta", *beta)],
            Family::ExpPower { alpha } | Family::InvLog { alpha } => vec![("alpha", *alpha)],
            Family::ExpGeometric { p } => vec![("p", *p)],
            _ => Vec::new(),
        }
    }

    /// Super-exponentially decaying families get a short log-domain truncation.
    pub fn default_length(&self) -> usize {
        match self {
            Family::ExpPower { alpha } if *alpha > 1.0 => 60,
            Family::ExpFactorial | Family::ExpGeometric { .. } | Family::AlmostAccumulation => 60,
            Family::Custom { log_values } => log_values.len(),
            _ => 5000,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SequenceSpec {
    pub family: Family,
    /// Number of terms (clusters for almost-accumulation).
    pub length: usize,
    /// First index `l`.
    pub start: usize,
}

impl SequenceSpec {
    pub fn new(family: Family) -> Self {
        let length = family.default_length();
        SequenceSpec {
            family,
            length,
            start: 1,
        }
    }

    pub fn with_length(mut self, length: usize) -> Self {
        self.length = length;
        self
    }

    pub fn generate(&self) -> Result<SequenceTerms> {
        if self.length == 0 {
            return Err(Error::InvalidParameter("truncation length must be positive".into()));
        }
        if self.start == 0 && !matches!(self.family, Family::Custom { .. }) {
            return Err(Error::InvalidParameter("sequence indices start at 1".into()));
        }
        let idx = self.start..self.start + self.length;
        let (indices, logs): (Vec<usize>, Vec<Scalar>) = match &self.family {
            Family::PowerLog { alpha, beta } => {
                let (a, b) = (Scalar::from_f64(*alpha), Scalar::from_f64(*beta));
                idx.map(|l| {
                    let lf = Scalar::from_i64(l as i64);
                    let ll = (&lf + &Scalar::one()).ln().ln();
                    (l, &a * ll - &b * lf.ln())
                })
                .unzip()
            }
            Family::ExpPower { alpha } => {
                let a = Scalar::from_f64(*alpha);
                idx.map(|l| {
                    let lf = Scalar::from_i64(l as i64);
                    let v = if *alpha == alpha.round() && *alpha >= 0.0 {
                        lf.powi(*alpha as i64)
                    } else {
                        (a.clone() * lf.ln()).exp()
                    };
                    (l, -v)
                })
                .unzip()
            }
            Family::InvLog { alpha } => {
                let a = Scalar::from_f64(*alpha);
                idx.map(|l| {
                    let lf = Scalar::from_i64(l as i64 + 1);
                    (l, -(&a * lf.ln().ln()))
                })
                .unzip()
            }
            Family::ExpFactorial => {
                let mut fact = Scalar::one();
                for i in 2..self.start {
                    fact = fact * Scalar::from_i64(i as i64);
                }
                idx.map(|l| {
                    if l >= 2 {
                        fact = &fact * &Scalar::from_i64(l as i64);
                    }
                    (l, -fact.clone())
                })
                .unzip()
            }
            Family::ExpGeometric { p } => {
                if *p <= 1.0 {
                    return Err(Error::InvalidParameter("exp-geometric needs p > 1".into()));
                }
                let ps = Scalar::from_f64(*p);
                idx.map(|l| (l, -ps.powi(l as i64))).unzip()
            }
            Family::AlmostAccumulation => {
                let mut out = (Vec::new(), Vec::new());
                let mut pos = self.start;
                for k in idx {
                    let kf = Scalar::from_i64(k as i64);
                    let base = Scalar::one() / &kf;
                    let step = (-kf).exp();
                    for j in (0..=k).rev() {
                        let v = &base + &(Scalar::from_i64(j as i64) * &step);
                        out.0.push(pos);
                        out.1.push(v.ln());
                        pos += 1;
                    }
                }
                out
            }
            Family::Custom { log_values } => {
                let n = self.length.min(log_values.len());
                (
                    (self.start..self.start + n).collect(),
                    log_values[..n].to_vec(),
                )
            }
        };
        for i in 1..logs.len() {
            if logs[i] >= logs[i - 1] {
                return Err(Error::NotDecreasing { index: indices[i] });
            }
        }
        Ok(SequenceTerms {
            family: self.family.name(),
            indices,
            log_values: logs,
        })
    }
}

/// Generated `log a_l` values with their indices.
#[derive(Clone, Debug)]
pub struct SequenceTerms {
    pub family: &'static str,
    pub indices: Vec<usize>,
    pub log_values: Vec<Scalar>,
}

impl SequenceTerms {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn first_index(&self) -> usize {
        self.indices[0]
    }

    pub fn last_index(&self) -> usize {
        self.indices[self.indices.len() - 1]
    }

    /// `log a_l` for sequence index `l`.
    pub fn log_at(&self, l: usize) -> Result<&Scalar> {
        let first = self.first_index();
        let last = self.last_index();
        if l < first || l > last {
            return Err(Error::OutOfTruncation {
                index: l,
                first,
                last,
            });
        }
        Ok(&self.log_values[l - first])
    }

    /// Error at the first `l` in `(lo, hi]` with `a_l >= a_{l-1} / 2`.
    pub fn check_halving(&self, lo: usize, hi: usize) -> Result<()> {
        let ln2 = Scalar::ln2();
        for l in lo.max(self.first_index()) + 1..=hi {
            let prev = self.log_at(l - 1)?;
            let cur = self.log_at(l)?;
            if *cur >= prev - &ln2 {
                return Err(Error::HalvingViolated { index: l });
            }
        }
        Ok(())
    }

    /// Halving condition over the whole truncation.
    pub fn halving_holds(&self) -> Result<()> {
        self.check_halving(self.first_index(), self.last_index())
    }

    /// `K = {0} u {a_l}`, keeping only terms representable without crossing the log floor.
    pub fn point_set(&self) -> PointSet<Scalar> {
        let floor = Scalar::from_f64(-LINEAR_LOG_FLOOR);
        let mut nodes: Vec<Scalar> = self
            .log_values
            .iter()
            .filter(|l| **l >= floor)
            .map(|l| l.exp())
            .collect();
        nodes.push(Scalar::zero());
        nodes.reverse();
        PointSet::simple(nodes).expect("strictly decreasing terms")
    }
}

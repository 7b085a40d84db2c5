//! Chain complexes materialized on a finite window of degrees.
//!
//! Differentials lower degree, `∂_n: X_n → X_{n-1}`. Conventions:
//!
//! * tensor: `∂(x ⊗ y) = ∂x ⊗ y + (-1)^{|x|} x ⊗ ∂y`
//! * Hom: `∂φ = ∂^Y φ - (-1)^n φ ∂^X` for `φ` of degree `n`
//! * shift: `(Σ^s X)_n = X_{n-s}` with differential `(-1)^s ∂^X`
//! * cone of `f: X → Y`: `X_{n-1} ⊕ Y_n` with `(x, y) ↦ (-∂x, f(x) + ∂y)`
//!
//! A degree is *known* if it lies in the window or the boundedness tag forces
//! the term there to vanish. Anything that needs an unknown degree fails with
//! [`Error::WindowInsufficient`].

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::hom::{hom_space, HomSpace};
use crate::linalg::{FpMatrix, Subspace};
use crate::module::{FdModule, ModuleMap};
use crate::tensor::{tensor_unchecked, TensorProduct};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Boundedness {
    /// Terms vanish in degrees below the bound.
    BoundedBelowAt(i64),
    /// Terms vanish in degrees above the bound.
    BoundedAboveAt(i64),
    /// Terms vanish outside the window.
    Bounded,
    /// Nothing is known outside the window.
    WindowOnly,
}

impl std::fmt::Display for Boundedness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Boundedness::BoundedBelowAt(b) => write!(f, "below:{b}"),
            Boundedness::BoundedAboveAt(b) => write!(f, "above:{b}"),
            Boundedness::Bounded => write!(f, "bounded"),
            Boundedness::WindowOnly => write!(f, "window"),
        }
    }
}

impl std::str::FromStr for Boundedness {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse { line: 1, message: format!("unknown boundedness tag `{s}`") };
        match s {
            "bounded" => Ok(Boundedness::Bounded),
            "window" => Ok(Boundedness::WindowOnly),
            _ => {
                let (k, v) = s.split_once(':').ok_or_else(bad)?;
                let v: i64 = v.parse().map_err(|_| bad())?;
                match k {
                    "below" => Ok(Boundedness::BoundedBelowAt(v)),
                    "above" => Ok(Boundedness::BoundedAboveAt(v)),
                    _ => Err(bad()),
                }
            }
        }
    }
}

#[inline]
pub(crate) fn sign(n: i64) -> bool {
    n.rem_euclid(2) == 1
}

fn signed(m: FpMatrix, negative: bool) -> FpMatrix {
    if negative {
        m.neg()
    } else {
        m
    }
}

#[derive(Clone, Debug)]
pub struct WindowComplex {
    algebra: Algebra,
    lo: i64,
    hi: i64,
    terms: Vec<FdModule>,
    /// `diffs[k] = ∂_{lo+1+k}`.
    diffs: Vec<FpMatrix>,
    tag: Boundedness,
}

/// Degree range that is materialized or certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Frame {
    known_lo: Option<i64>,
    known_hi: Option<i64>,
    zero_below: Option<i64>,
    zero_above: Option<i64>,
}

impl Frame {
    fn materialize(self) -> Result<(i64, i64, Boundedness)> {
        let lo = self.known_lo.or(self.zero_below).expect("known region bounded or terms vanish");
        let hi = self.known_hi.or(self.zero_above).expect("known region bounded or terms vanish");
        if lo > hi {
            return Err(Error::WindowInsufficient { degree: lo, lo: hi, hi });
        }
        let tag = match (self.zero_below, self.zero_above) {
            (Some(_), Some(_)) => Boundedness::Bounded,
            (Some(b), None) => Boundedness::BoundedBelowAt(b),
            (None, Some(a)) => Boundedness::BoundedAboveAt(a),
            (None, None) => Boundedness::WindowOnly,
        };
        Ok((lo, hi, tag))
    }
}

impl WindowComplex {
    /// Validates shapes, that differentials are module maps, `∂∂ = 0`, and the tag.
    pub fn new(algebra: &Algebra, lo: i64, terms: Vec<FdModule>, diffs: Vec<FpMatrix>, tag: Boundedness) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Dimension("a window complex needs at least one term".into()));
        }
        if diffs.len() + 1 != terms.len() {
            return Err(Error::Dimension(format!("{} terms need {} differentials, got {}", terms.len(), terms.len() - 1, diffs.len())));
        }
        let hi = lo + terms.len() as i64 - 1;
        for t in &terms {
            if t.algebra() != algebra {
                return Err(Error::AlgebraMismatch("complex terms over different algebras".into()));
            }
        }
        let x = WindowComplex { algebra: algebra.clone(), lo, hi, terms, diffs, tag };
        match tag {
            Boundedness::BoundedBelowAt(b) if b < lo || b > hi + 1 => {
                return Err(Error::Dimension(format!("lower bound {b} outside window [{lo}, {hi}]")))
            }
            Boundedness::BoundedAboveAt(b) if b > hi || b < lo - 1 => {
                return Err(Error::Dimension(format!("upper bound {b} outside window [{lo}, {hi}]")))
            }
            _ => {}
        }
        for d in lo..=hi {
            if x.forced_zero(d) && !x.terms[(d - lo) as usize].is_zero() {
                return Err(Error::Dimension(format!("term in degree {d} must vanish by the boundedness tag")));
            }
        }
        x.verify()?;
        Ok(x)
    }

    pub(crate) fn unchecked(algebra: Algebra, lo: i64, terms: Vec<FdModule>, diffs: Vec<FpMatrix>, tag: Boundedness) -> Self {
        let hi = lo + terms.len() as i64 - 1;
        debug_assert_eq!(diffs.len() + 1, terms.len());
        let x = WindowComplex { algebra, lo, hi, terms, diffs, tag };
        debug_assert!(x.verify().is_ok(), "{:?}", x.verify());
        x
    }

    /// Re-checks shapes, commutation with the action, and `∂∂ = 0`.
    pub fn verify(&self) -> Result<()> {
        for d in self.lo + 1..=self.hi {
            let dm = self.stored_diff(d);
            let (src, tgt) = (self.stored_term(d), self.stored_term(d - 1));
            if dm.shape() != (tgt.dim(), src.dim()) {
                return Err(Error::ShapeMismatch(format!("differential in degree {d} has the wrong shape")));
            }
            ModuleMap::unchecked(src.clone(), tgt.clone(), dm.clone())
                .verify()
                .map_err(|e| Error::InvalidMap(format!("differential in degree {d}: {e}")))?;
            if d > self.lo + 1 && !self.stored_diff(d - 1).mul_unchecked(dm).is_zero() {
                return Err(Error::ConstructionInvariant(format!("∂∂ ≠ 0 at degree {d}")));
            }
        }
        Ok(())
    }

    /// A single module in one degree.
    pub fn concentrated(m: &FdModule, degree: i64) -> Self {
        WindowComplex::unchecked(m.algebra().clone(), degree, vec![m.clone()], vec![], Boundedness::Bounded)
    }

    pub fn zero(algebra: &Algebra) -> Self {
        WindowComplex::concentrated(&FdModule::zero(algebra), 0)
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn tag(&self) -> Boundedness {
        self.tag
    }

    pub fn zero_below(&self) -> Option<i64> {
        match self.tag {
            Boundedness::BoundedBelowAt(b) => Some(b),
            Boundedness::Bounded => Some(self.lo),
            _ => None,
        }
    }

    pub fn zero_above(&self) -> Option<i64> {
        match self.tag {
            Boundedness::BoundedAboveAt(b) => Some(b),
            Boundedness::Bounded => Some(self.hi),
            _ => None,
        }
    }

    fn forced_zero(&self, d: i64) -> bool {
        self.zero_below().is_some_and(|b| d < b) || self.zero_above().is_some_and(|a| d > a)
    }

    pub fn is_known(&self, d: i64) -> bool {
        (self.lo..=self.hi).contains(&d) || self.forced_zero(d)
    }

    fn frame(&self) -> Frame {
        Frame {
            known_lo: self.zero_below().is_none().then_some(self.lo),
            known_hi: self.zero_above().is_none().then_some(self.hi),
            zero_below: self.zero_below(),
            zero_above: self.zero_above(),
        }
    }

    fn insufficient(&self, d: i64) -> Error {
        Error::WindowInsufficient { degree: d, lo: self.lo, hi: self.hi }
    }

    fn stored_term(&self, d: i64) -> &FdModule {
        &self.terms[(d - self.lo) as usize]
    }

    fn stored_diff(&self, d: i64) -> &FpMatrix {
        &self.diffs[(d - self.lo - 1) as usize]
    }

    pub fn terms(&self) -> &[FdModule] {
        &self.terms
    }

    pub fn term(&self, d: i64) -> Result<FdModule> {
        if (self.lo..=self.hi).contains(&d) {
            Ok(self.stored_term(d).clone())
        } else if self.forced_zero(d) {
            Ok(FdModule::zero(&self.algebra))
        } else {
            Err(self.insufficient(d))
        }
    }

    pub fn term_dim(&self, d: i64) -> Result<usize> {
        if (self.lo..=self.hi).contains(&d) {
            Ok(self.stored_term(d).dim())
        } else if self.forced_zero(d) {
            Ok(0)
        } else {
            Err(self.insufficient(d))
        }
    }

    /// `∂_d: X_d → X_{d-1}`.
    pub fn diff(&self, d: i64) -> Result<FpMatrix> {
        if d > self.lo && d <= self.hi {
            return Ok(self.stored_diff(d).clone());
        }
        let src = self.term_dim(d)?;
        let tgt = self.term_dim(d - 1)?;
        // One side is outside the window, so it is forced zero.
        Ok(FpMatrix::zeros(self.algebra.modulus(), tgt, src))
    }

    pub fn diff_map(&self, d: i64) -> Result<ModuleMap> {
        Ok(ModuleMap::unchecked(self.term(d)?, self.term(d - 1)?, self.diff(d)?))
    }

    fn diff_rank(&self, d: i64) -> Result<usize> {
        if d > self.lo && d <= self.hi {
            Ok(self.stored_diff(d).rank())
        } else {
            self.term_dim(d)?;
            self.term_dim(d - 1)?;
            Ok(0)
        }
    }

    pub fn homology_dim(&self, n: i64) -> Result<usize> {
        if self.forced_zero(n) {
            return Ok(0);
        }
        let dim = self.term_dim(n)?;
        if dim == 0 {
            return Ok(0);
        }
        let out = self.diff_rank(n)?;
        let inc = self.diff_rank(n + 1)?;
        Ok(dim - out - inc)
    }

    /// `H_n = Ker ∂_n / Im ∂_{n+1}` with its induced module structure.
    pub fn homology_at(&self, n: i64) -> Result<FdModule> {
        if self.forced_zero(n) {
            return Ok(FdModule::zero(&self.algebra));
        }
        let xn = self.term(n)?;
        let cycles = self.diff(n)?.kernel_basis();
        let boundaries = self.diff(n + 1)?.image_basis();
        let z = xn.submodule_unchecked(&cycles);
        let coords: Vec<Vec<u32>> = (0..boundaries.dim())
            .map(|s| cycles.coordinates(boundaries.vector(s)).expect("∂∂ = 0"))
            .collect();
        let b = Subspace::from_vectors(self.algebra.modulus(), cycles.dim(), &coords);
        Ok(z.source().quotient_unchecked(&b).target().clone())
    }

    /// Degrees in `[lo, hi]` where homology is nonzero; fails if any degree is not certifiable.
    pub fn nonzero_homology(&self, lo: i64, hi: i64) -> Result<Vec<i64>> {
        let mut out = Vec::new();
        for n in lo..=hi {
            if self.homology_dim(n)? != 0 {
                out.push(n);
            }
        }
        Ok(out)
    }

    /// Degrees whose homology can be certified from the window and tag.
    pub fn certified_degrees(&self) -> (i64, i64) {
        let lo = if self.zero_below().is_some() { self.lo } else { self.lo + 1 };
        let hi = if self.zero_above().is_some() { self.hi } else { self.hi - 1 };
        (lo, hi)
    }

    pub fn is_acyclic_on_window(&self) -> Result<bool> {
        let (lo, hi) = self.certified_degrees();
        Ok(self.nonzero_homology(lo, hi)?.is_empty())
    }

    /// `Σ^s X`.
    pub fn shift(&self, s: i64) -> WindowComplex {
        let neg = sign(s);
        let tag = match self.tag {
            Boundedness::BoundedBelowAt(b) => Boundedness::BoundedBelowAt(b + s),
            Boundedness::BoundedAboveAt(b) => Boundedness::BoundedAboveAt(b + s),
            t => t,
        };
        let diffs = self.diffs.iter().map(|d| signed(d.clone(), neg)).collect();
        WindowComplex::unchecked(self.algebra.clone(), self.lo + s, self.terms.clone(), diffs, tag)
    }

    /// Restriction to `[lo, hi]` inside the window; the result carries no tag.
    pub fn restrict(&self, lo: i64, hi: i64) -> Result<WindowComplex> {
        if lo < self.lo || hi > self.hi || lo > hi {
            return Err(Error::WindowInsufficient { degree: if lo < self.lo { lo } else { hi }, lo: self.lo, hi: self.hi });
        }
        let terms = (lo..=hi).map(|d| self.stored_term(d).clone()).collect();
        let diffs = (lo + 1..=hi).map(|d| self.stored_diff(d).clone()).collect();
        let tag = match (self.zero_below(), self.zero_above()) {
            (Some(b), Some(a)) if lo <= b && a <= hi => Boundedness::Bounded,
            (Some(b), _) if lo <= b => Boundedness::BoundedBelowAt(b),
            (_, Some(a)) if a <= hi => Boundedness::BoundedAboveAt(a),
            _ => Boundedness::WindowOnly,
        };
        Ok(WindowComplex::unchecked(self.algebra.clone(), lo, terms, diffs, tag))
    }

    /// `Thb_n X`: the quotient complex of terms in degrees `≥ n`.
    pub fn hard_trunc_below(&self, n: i64) -> Result<WindowComplex> {
        let za = self.zero_above();
        if n > self.hi {
            return match za {
                Some(a) if n > a => Ok(WindowComplex::zero(&self.algebra).shift(n)),
                _ => Err(self.insufficient(n)),
            };
        }
        let lo = n.max(self.lo);
        if n < self.lo && self.zero_below().is_none() {
            return Err(self.insufficient(n));
        }
        let terms = (lo..=self.hi).map(|d| self.stored_term(d).clone()).collect();
        let diffs = (lo + 1..=self.hi).map(|d| self.stored_diff(d).clone()).collect();
        let tag = if za.is_some() { Boundedness::Bounded } else { Boundedness::BoundedBelowAt(lo) };
        Ok(WindowComplex::unchecked(self.algebra.clone(), lo, terms, diffs, tag))
    }

    /// `Tha_n X`: the subcomplex of terms in degrees `≤ n`.
    pub fn hard_trunc_above(&self, n: i64) -> Result<WindowComplex> {
        let zb = self.zero_below();
        if n < self.lo {
            return match zb {
                Some(b) if n < b => Ok(WindowComplex::zero(&self.algebra).shift(n)),
                _ => Err(self.insufficient(n)),
            };
        }
        let hi = n.min(self.hi);
        if n > self.hi && self.zero_above().is_none() {
            return Err(self.insufficient(n));
        }
        let terms = (self.lo..=hi).map(|d| self.stored_term(d).clone()).collect();
        let diffs = (self.lo + 1..=hi).map(|d| self.stored_diff(d).clone()).collect();
        let tag = if zb.is_some() { Boundedness::Bounded } else { Boundedness::BoundedAboveAt(hi) };
        Ok(WindowComplex::unchecked(self.algebra.clone(), self.lo, terms, diffs, tag))
    }

    /// Plain-text dump: dimensions and differential matrices per degree.
    pub fn dump(&self) -> String {
        let mut s = format!("complex p={} lo={} hi={} tag={}\n", self.algebra.modulus(), self.lo, self.hi, self.tag);
        for d in self.lo..=self.hi {
            let _ = writeln!(s, "term {d} dim={}", self.stored_term(d).dim());
        }
        for d in self.lo + 1..=self.hi {
            let m = self.stored_diff(d);
            let _ = writeln!(s, "diff {d} {}x{}", m.rows(), m.cols());
            for r in 0..m.rows() {
                let row: Vec<String> = m.row(r).iter().map(u32::to_string).collect();
                let _ = writeln!(s, "{}", row.join(" "));
            }
        }
        s
    }

    /// Reads a dump back as a complex of vector spaces.
    pub fn parse_dump(text: &str) -> Result<WindowComplex> {
        let perr = |line: usize, message: String| Error::Parse { line, message };
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        let (hl, header) = *lines.first().ok_or_else(|| perr(1, "empty dump".into()))?;
        let mut fields = header.split_whitespace();
        if fields.next() != Some("complex") {
            return Err(perr(hl, "expected `complex` header".into()));
        }
        let (mut p, mut lo, mut hi, mut tag) = (None, None, None, None);
        for f in fields {
            let (k, v) = f.split_once('=').ok_or_else(|| perr(hl, format!("bad field `{f}`")))?;
            match k {
                "p" => p = v.parse::<u32>().ok(),
                "lo" => lo = v.parse::<i64>().ok(),
                "hi" => hi = v.parse::<i64>().ok(),
                "tag" => tag = Some(v.parse::<Boundedness>().map_err(|e| perr(hl, e.to_string()))?),
                _ => return Err(perr(hl, format!("unknown field `{k}`"))),
            }
        }
        let (Some(p), Some(lo), Some(hi), Some(tag)) = (p, lo, hi, tag) else {
            return Err(perr(hl, "header needs p, lo, hi and tag".into()));
        };
        if hi < lo {
            return Err(perr(hl, "empty window".into()));
        }
        let field = Algebra::field(p).map_err(|e| perr(hl, e.to_string()))?;
        let n = (hi - lo + 1) as usize;
        let mut dims = vec![None; n];
        let mut diffs = vec![None; n - 1];
        let mut i = 1;
        while i < lines.len() {
            let (ln, l) = lines[i];
            let parts: Vec<&str> = l.split_whitespace().collect();
            match parts.as_slice() {
                ["term", d, dim] => {
                    let d: i64 = d.parse().map_err(|_| perr(ln, format!("bad degree `{d}`")))?;
                    let dim = dim
                        .strip_prefix("dim=")
                        .and_then(|v| v.parse::<usize>().ok())
                        .ok_or_else(|| perr(ln, format!("bad dimension `{dim}`")))?;
                    if d < lo || d > hi {
                        return Err(perr(ln, format!("degree {d} outside window")));
                    }
                    dims[(d - lo) as usize] = Some(dim);
                    i += 1;
                }
                ["diff", d, shape] => {
                    let d: i64 = d.parse().map_err(|_| perr(ln, format!("bad degree `{d}`")))?;
                    if d <= lo || d > hi {
                        return Err(perr(ln, format!("differential degree {d} outside window")));
                    }
                    let (r, c) = shape
                        .split_once('x')
                        .and_then(|(r, c)| Some((r.parse::<usize>().ok()?, c.parse::<usize>().ok()?)))
                        .ok_or_else(|| perr(ln, format!("bad shape `{shape}`")))?;
                    let mut data = Vec::with_capacity(r * c);
                    for k in 0..r {
                        let (rl, row) = *lines.get(i + 1 + k).ok_or_else(|| perr(ln, "truncated matrix".into()))?;
                        let vals: Vec<u32> = row
                            .split_whitespace()
                            .map(|t| t.parse::<u32>().map_err(|_| perr(rl, format!("bad entry `{t}`"))))
                            .collect::<Result<_>>()?;
                        if vals.len() != c {
                            return Err(perr(rl, format!("row has {} entries, expected {c}", vals.len())));
                        }
                        data.extend(vals.into_iter().map(|v| v % p));
                    }
                    diffs[(d - lo - 1) as usize] = Some(FpMatrix::from_flat(p, r, c, data));
                    i += 1 + r;
                }
                _ => return Err(perr(ln, format!("unrecognized line `{l}`"))),
            }
        }
        let terms = dims
            .into_iter()
            .enumerate()
            .map(|(k, d)| d.map(|d| vector_space(&field, d)).ok_or_else(|| perr(hl, format!("missing term {}", lo + k as i64))))
            .collect::<Result<Vec<_>>>()?;
        let diffs = diffs
            .into_iter()
            .enumerate()
            .map(|(k, d)| d.ok_or_else(|| perr(hl, format!("missing differential {}", lo + 1 + k as i64))))
            .collect::<Result<Vec<_>>>()?;
        WindowComplex::new(&field, lo, terms, diffs, tag)
    }
}

/// `GF(p)^n` as a module over the one-dimensional algebra.
pub fn vector_space(field: &Algebra, n: usize) -> FdModule {
    debug_assert_eq!(field.dim(), 1);
    FdModule::free(field, n)
}

/// A family of degree-wise module maps `X_d → Y_d`.
#[derive(Clone, Debug)]
pub struct ComplexMorphism {
    source: WindowComplex,
    target: WindowComplex,
    lo: i64,
    maps: Vec<FpMatrix>,
}

impl ComplexMorphism {
    /// `maps[k]` is the component in degree `lo + k`; outside that range the
    /// morphism is zero wherever a term is forced zero.
    pub fn new(source: &WindowComplex, target: &WindowComplex, lo: i64, maps: Vec<FpMatrix>) -> Result<Self> {
        if source.algebra() != target.algebra() {
            return Err(Error::AlgebraMismatch("morphism between complexes over different algebras".into()));
        }
        let f = ComplexMorphism { source: source.clone(), target: target.clone(), lo, maps };
        for (k, m) in f.maps.iter().enumerate() {
            let d = lo + k as i64;
            let (s, t) = (source.term(d)?, target.term(d)?);
            if m.shape() != (t.dim(), s.dim()) {
                return Err(Error::ShapeMismatch(format!("component in degree {d} has the wrong shape")));
            }
            ModuleMap::unchecked(s, t, m.clone()).verify()?;
        }
        f.verify()?;
        Ok(f)
    }

    pub(crate) fn unchecked(source: WindowComplex, target: WindowComplex, lo: i64, maps: Vec<FpMatrix>) -> Self {
        ComplexMorphism { source, target, lo, maps }
    }

    pub fn source(&self) -> &WindowComplex {
        &self.source
    }

    pub fn target(&self) -> &WindowComplex {
        &self.target
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.lo + self.maps.len() as i64 - 1)
    }

    pub fn component(&self, d: i64) -> Result<FpMatrix> {
        let (lo, hi) = self.window();
        if (lo..=hi).contains(&d) {
            return Ok(self.maps[(d - lo) as usize].clone());
        }
        let s = self.source.term_dim(d)?;
        let t = self.target.term_dim(d)?;
        if s == 0 || t == 0 {
            return Ok(FpMatrix::zeros(self.source.algebra.modulus(), t, s));
        }
        Err(Error::WindowInsufficient { degree: d, lo, hi })
    }

    /// Checks `f ∂ = ∂ f` in every degree where both sides are available.
    pub fn verify(&self) -> Result<()> {
        let (lo, hi) = self.window();
        for d in lo..=hi + 1 {
            let (Ok(fd), Ok(fd1), Ok(dx), Ok(dy)) =
                (self.component(d), self.component(d - 1), self.source.diff(d), self.target.diff(d))
            else {
                continue;
            };
            if fd1.mul_unchecked(&dx) != dy.mul_unchecked(&fd) {
                return Err(Error::InvalidMap(format!("not a chain map in degree {d}")));
            }
        }
        Ok(())
    }

    pub fn identity(x: &WindowComplex) -> Self {
        let maps = x.terms.iter().map(|t| FpMatrix::identity(t.modulus(), t.dim())).collect();
        ComplexMorphism::unchecked(x.clone(), x.clone(), x.lo, maps)
    }

    /// Whether every component on the window is bijective.
    pub fn is_iso_on_window(&self) -> bool {
        self.maps.iter().all(|m| m.rows() == m.cols() && m.rank() == m.cols())
    }

    /// Whether the cone is acyclic on every certifiable degree.
    pub fn is_quasi_iso_on_window(&self) -> Result<bool> {
        cone(self)?.is_acyclic_on_window()
    }
}

/// The mapping cone of `f: X → Y`.
pub fn cone(f: &ComplexMorphism) -> Result<WindowComplex> {
    let x = &f.source;
    let y = &f.target;
    let fx = x.frame();
    let fy = y.frame();
    let lo_of = |a: Option<i64>, b: Option<i64>| match (a, b) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (a, b) => a.or(b),
    };
    let hi_of = |a: Option<i64>, b: Option<i64>| match (a, b) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    let both = |a: Option<i64>, b: Option<i64>, pick: fn(i64, i64) -> i64| Some(pick(a?, b?));
    let frame = Frame {
        known_lo: lo_of(fx.known_lo.map(|v| v + 1), fy.known_lo),
        known_hi: hi_of(fx.known_hi.map(|v| v + 1), fy.known_hi),
        zero_below: both(fx.zero_below.map(|v| v + 1), fy.zero_below, i64::min),
        zero_above: both(fx.zero_above.map(|v| v + 1), fy.zero_above, i64::max),
    };
    let frame = Frame {
        known_lo: if frame.zero_below.is_some() { None } else { frame.known_lo.or(frame.zero_below) },
        known_hi: if frame.zero_above.is_some() { None } else { frame.known_hi.or(frame.zero_above) },
        ..frame
    };
    let (lo, hi, tag) = frame.materialize()?;
    let a = x.algebra.clone();
    let p = a.modulus();
    let mut terms = Vec::new();
    for n in lo..=hi {
        let xs = x.term(n - 1)?;
        let ys = y.term(n)?;
        terms.push(FdModule::direct_sum_unchecked(&a, &[&xs, &ys]));
    }
    let mut diffs = Vec::new();
    for n in lo + 1..=hi {
        let (xn1, yn) = (x.term_dim(n - 1)?, y.term_dim(n)?);
        let (xn2, yn1) = (x.term_dim(n - 2)?, y.term_dim(n - 1)?);
        let mut m = FpMatrix::zeros(p, xn2 + yn1, xn1 + yn);
        m.paste(0, 0, &x.diff(n - 1)?.neg());
        m.paste(xn2, 0, &f.component(n - 1)?);
        m.paste(xn2, xn1, &y.diff(n)?);
        diffs.push(m);
    }
    Ok(WindowComplex::unchecked(a, lo, terms, diffs, tag))
}

/// Inclusion `Tha_{n-1} X → X` and projection `X → Thb_n X` on the window of `X`.
pub fn truncation_sequence(x: &WindowComplex, n: i64) -> Result<(ComplexMorphism, ComplexMorphism)> {
    let above = x.hard_trunc_above(n - 1)?;
    let below = x.hard_trunc_below(n)?;
    let p = x.algebra.modulus();
    let inc = (x.lo..=x.hi)
        .map(|d| {
            let t = x.stored_term(d).dim();
            if d < n {
                FpMatrix::identity(p, t)
            } else {
                FpMatrix::zeros(p, t, 0)
            }
        })
        .collect();
    let proj = (x.lo..=x.hi)
        .map(|d| {
            let t = x.stored_term(d).dim();
            if d >= n {
                FpMatrix::identity(p, t)
            } else {
                FpMatrix::zeros(p, 0, t)
            }
        })
        .collect();
    Ok((
        ComplexMorphism::unchecked(above, x.clone(), x.lo, inc),
        ComplexMorphism::unchecked(x.clone(), below, x.lo, proj),
    ))
}

/// One summand `X_i ⊗ Y_{n-i}` (or `Hom(X_i, Y_{i+n})`) of a total complex.
#[derive(Clone, Debug)]
pub(crate) struct Component<T> {
    pub i: i64,
    pub offset: usize,
    pub space: T,
}

pub(crate) fn find<T>(comps: &[Component<T>], i: i64) -> Option<&Component<T>> {
    comps.iter().find(|c| c.i == i)
}

/// A total complex together with its summand decomposition per degree.
#[derive(Clone, Debug)]
pub(crate) struct Total<T> {
    pub complex: WindowComplex,
    pub comps: Vec<Vec<Component<T>>>,
}

impl<T> Total<T> {
    pub fn degree(&self, n: i64) -> &[Component<T>] {
        let k = n - self.complex.lo;
        if k < 0 || k as usize >= self.comps.len() {
            return &[];
        }
        &self.comps[k as usize]
    }
}

/// Known-region intervals of a total complex built from `x` and a bounded `y`.
fn total_frame(unbounded: &WindowComplex, a: i64, c: i64) -> Frame {
    let f = unbounded.frame();
    Frame {
        known_lo: f.known_lo.map(|v| v + c),
        known_hi: f.known_hi.map(|v| v + a),
        zero_below: f.zero_below.map(|v| v + a),
        zero_above: f.zero_above.map(|v| v + c),
    }
}

/// Terms of a total complex: plain vector spaces, or modules over a commutative
/// algebra with the action given per summand.
fn total_terms<T>(
    algebra: &Algebra,
    field: &Algebra,
    comps: &[Vec<Component<T>>],
    modules: bool,
    action: impl Fn(&Component<T>, usize) -> FpMatrix + Sync,
    dim: impl Fn(&T) -> usize,
) -> Vec<FdModule>
where
    T: Sync,
{
    comps
        .iter()
        .map(|cs| {
            let n: usize = cs.iter().map(|c| dim(&c.space)).sum();
            if !modules {
                return vector_space(field, n);
            }
            let p = algebra.modulus();
            let actions = (0..algebra.dim())
                .map(|g| {
                    let blocks: Vec<FpMatrix> = cs.iter().map(|c| action(c, g)).collect();
                    let refs: Vec<&FpMatrix> = blocks.iter().collect();
                    if refs.is_empty() {
                        FpMatrix::zeros(p, 0, 0)
                    } else {
                        FpMatrix::block_diag(p, &refs)
                    }
                })
                .collect();
            FdModule::from_parts(algebra.clone(), n, actions, None)
        })
        .collect()
}

pub(crate) fn tensor_total(x: &WindowComplex, y: &WindowComplex, modules: bool) -> Result<Total<TensorProduct>> {
    if *x.algebra() != y.algebra().opposite() {
        return Err(Error::AlgebraMismatch("tensor of complexes needs modules over opposite algebras".into()));
    }
    if modules && !y.algebra.is_commutative() {
        return Err(Error::Precondition("module structure on a tensor product needs a commutative algebra".into()));
    }
    let frame = if y.tag == Boundedness::Bounded {
        total_frame(x, y.lo, y.hi)
    } else if x.tag == Boundedness::Bounded {
        total_frame(y, x.lo, x.hi)
    } else {
        return Err(Error::Precondition("tensor product of two unbounded complexes is not materialized".into()));
    };
    let (lo, hi, tag) = frame.materialize()?;
    let field = Algebra::field(x.algebra.modulus())?;
    let comps: Vec<Vec<Component<TensorProduct>>> = (lo..=hi)
        .into_par_iter()
        .map(|n| {
            let mut out = Vec::new();
            let mut offset = 0;
            for i in x.lo.max(n - y.hi)..=x.hi.min(n - y.lo) {
                let (xi, yj) = (x.stored_term(i), y.stored_term(n - i));
                if xi.is_zero() || yj.is_zero() {
                    continue;
                }
                let space = tensor_unchecked(xi, yj);
                let dim = space.dim();
                out.push(Component { i, offset, space });
                offset += dim;
            }
            out
        })
        .collect();
    let terms = total_terms(
        &y.algebra,
        &field,
        &comps,
        modules,
        |c, g| {
            let t = &c.space;
            let id = FpMatrix::identity(t.right().modulus(), t.right().dim());
            t.induced(t.left().action(g), &id, t)
        },
        TensorProduct::dim,
    );
    let p = field.modulus();
    let diffs: Vec<FpMatrix> = (lo + 1..=hi)
        .into_par_iter()
        .map(|n| {
            let src = &comps[(n - lo) as usize];
            let tgt = &comps[(n - 1 - lo) as usize];
            let mut m = FpMatrix::zeros(p, terms[(n - 1 - lo) as usize].dim(), terms[(n - lo) as usize].dim());
            for c in src {
                let (i, j) = (c.i, n - c.i);
                let (xi, yj) = (x.stored_term(i), y.stored_term(j));
                if let Some(t) = find(tgt, i - 1) {
                    let dx = x.stored_diff(i);
                    let block = c.space.induced(dx, &FpMatrix::identity(p, yj.dim()), &t.space);
                    m.paste(t.offset, c.offset, &block);
                }
                if let Some(t) = find(tgt, i) {
                    let dy = y.stored_diff(j);
                    let block = c.space.induced(&FpMatrix::identity(p, xi.dim()), dy, &t.space);
                    m.paste(t.offset, c.offset, &signed(block, sign(i)));
                }
            }
            m
        })
        .collect();
    let algebra = if modules { y.algebra.clone() } else { field };
    Ok(Total { complex: WindowComplex::unchecked(algebra, lo, terms, diffs, tag), comps })
}

/// `X ⊗_A Y` for a complex `X` over `A°` and `Y` over `A`; one factor must be bounded.
pub fn tensor_complex(x: &WindowComplex, y: &WindowComplex) -> Result<WindowComplex> {
    Ok(tensor_total(x, y, false)?.complex)
}

/// `X ⊗_A Y` as a complex of `A`-modules, for commutative `A`.
pub fn tensor_complex_of_modules(x: &WindowComplex, y: &WindowComplex) -> Result<WindowComplex> {
    Ok(tensor_total(x, y, true)?.complex)
}

pub(crate) fn hom_total(x: &WindowComplex, y: &WindowComplex, modules: bool) -> Result<Total<HomSpace>> {
    if x.algebra() != y.algebra() {
        return Err(Error::AlgebraMismatch("Hom complex of complexes over different algebras".into()));
    }
    if modules && !y.algebra.is_commutative() {
        return Err(Error::Precondition("module structure on a Hom complex needs a commutative algebra".into()));
    }
    let frame = if x.tag == Boundedness::Bounded {
        let f = y.frame();
        Frame {
            known_lo: f.known_lo.map(|v| v - x.lo),
            known_hi: f.known_hi.map(|v| v - x.hi),
            zero_below: f.zero_below.map(|v| v - x.hi),
            zero_above: f.zero_above.map(|v| v - x.lo),
        }
    } else if y.tag == Boundedness::Bounded {
        let f = x.frame();
        Frame {
            known_lo: f.known_hi.map(|v| y.hi - v),
            known_hi: f.known_lo.map(|v| y.lo - v),
            zero_below: f.zero_above.map(|v| y.lo - v),
            zero_above: f.zero_below.map(|v| y.hi - v),
        }
    } else {
        return Err(Error::Precondition("Hom complex of two unbounded complexes is not materialized".into()));
    };
    let (lo, hi, tag) = frame.materialize()?;
    let field = Algebra::field(x.algebra.modulus())?;
    let p = field.modulus();
    let comps: Vec<Vec<Component<HomSpace>>> = (lo..=hi)
        .into_par_iter()
        .map(|n| {
            let mut out = Vec::new();
            let mut offset = 0;
            for i in x.lo.max(y.lo - n)..=x.hi.min(y.hi - n) {
                let (xi, yj) = (x.stored_term(i), y.stored_term(i + n));
                if xi.is_zero() || yj.is_zero() {
                    continue;
                }
                let space = hom_space(xi, yj).expect("same algebra");
                let dim = space.dim();
                if dim == 0 {
                    continue;
                }
                out.push(Component { i, offset, space });
                offset += dim;
            }
            out
        })
        .collect();
    let terms = total_terms(
        &y.algebra,
        &field,
        &comps,
        modules,
        |c, g| {
            let h = &c.space;
            let id = FpMatrix::identity(p, h.source().dim());
            h.induced(&id, h.target().action(g), h)
        },
        HomSpace::dim,
    );
    let diffs: Vec<FpMatrix> = (lo + 1..=hi)
        .into_par_iter()
        .map(|n| {
            let src = &comps[(n - lo) as usize];
            let tgt = &comps[(n - 1 - lo) as usize];
            let mut m = FpMatrix::zeros(p, terms[(n - 1 - lo) as usize].dim(), terms[(n - lo) as usize].dim());
            for c in src {
                let i = c.i;
                let (xi, yj) = (x.stored_term(i), y.stored_term(i + n));
                // ∂^Y ∘ φ lands in Hom(X_i, Y_{i+n-1}).
                if let Some(t) = find(tgt, i) {
                    let dy = y.stored_diff(i + n);
                    let block = c.space.induced(&FpMatrix::identity(p, xi.dim()), dy, &t.space);
                    m.paste(t.offset, c.offset, &block);
                }
                // -(-1)^n φ ∘ ∂^X lands in Hom(X_{i+1}, Y_{i+n}).
                if let Some(t) = find(tgt, i + 1) {
                    let dx = x.stored_diff(i + 1);
                    let block = c.space.induced(dx, &FpMatrix::identity(p, yj.dim()), &t.space);
                    m.paste(t.offset, c.offset, &signed(block, !sign(n)));
                }
            }
            m
        })
        .collect();
    let algebra = if modules { y.algebra.clone() } else { field };
    Ok(Total { complex: WindowComplex::unchecked(algebra, lo, terms, diffs, tag), comps })
}

/// `Hom_A(X, Y)` for complexes over the same algebra; one factor must be bounded.
pub fn hom_complex(x: &WindowComplex, y: &WindowComplex) -> Result<WindowComplex> {
    Ok(hom_total(x, y, false)?.complex)
}

/// `Hom_A(X, Y)` as a complex of `A`-modules, for commutative `A`.
pub fn hom_complex_of_modules(x: &WindowComplex, y: &WindowComplex) -> Result<WindowComplex> {
    Ok(hom_total(x, y, true)?.complex)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dual_numbers() -> Algebra {
        Algebra::truncated_polynomial(2, 2).unwrap()
    }

    /// `0 → A →x A → 0` in degrees 1, 0.
    fn times_x(a: &Algebra) -> WindowComplex {
        let r = FdModule::regular(a);
        WindowComplex::new(a, 0, vec![r.clone(), r], vec![a.left_mult(1).clone()], Boundedness::Bounded).unwrap()
    }

    #[test]
    fn homology_of_multiplication_by_x() {
        let a = dual_numbers();
        let x = times_x(&a);
        assert_eq!(x.homology_dim(0).unwrap(), 1);
        assert_eq!(x.homology_dim(1).unwrap(), 1);
        assert_eq!(x.homology_dim(2).unwrap(), 0);
        assert_eq!(x.homology_dim(-5).unwrap(), 0);
        let h0 = x.homology_at(0).unwrap();
        assert_eq!(h0.dim(), 1);
        assert!(h0.action(1).is_zero());
    }

    #[test]
    fn single_module_homology() {
        let a = Algebra::square_zero(2, 2).unwrap();
        let m = FdModule::regular(&a).dual();
        let x = WindowComplex::concentrated(&m, 0);
        assert_eq!(x.homology_at(0).unwrap().dim(), 3);
        assert_eq!(x.homology_dim(1).unwrap(), 0);
    }

    #[test]
    fn window_only_refuses_edges() {
        let a = dual_numbers();
        let x = times_x(&a);
        let w = WindowComplex::unchecked(a.clone(), 0, x.terms.clone(), x.diffs.clone(), Boundedness::WindowOnly);
        assert!(matches!(w.homology_dim(0), Err(Error::WindowInsufficient { .. })));
        assert!(matches!(w.homology_dim(1), Err(Error::WindowInsufficient { .. })));
    }

    #[test]
    fn shift_moves_homology() {
        let a = dual_numbers();
        let r = FdModule::regular(&a);
        let k = FdModule::top_of_regular(&a).unwrap();
        let x = WindowComplex::concentrated(&k, 0);
        let s = x.shift(1);
        assert_eq!(s.homology_dim(1).unwrap(), 1);
        assert_eq!(s.homology_dim(0).unwrap(), 0);
        let y = times_x(&a).shift(3);
        assert_eq!(y.homology_dim(3).unwrap(), 1);
        assert_eq!(y.homology_dim(4).unwrap(), 1);
        let _ = r;
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let a = dual_numbers();
        let x = times_x(&a);
        let c = cone(&ComplexMorphism::identity(&x)).unwrap();
        assert!(c.is_acyclic_on_window().unwrap());
        for n in -3..5 {
            assert_eq!(c.homology_dim(n).unwrap(), 0);
        }
    }

    #[test]
    fn tensor_with_k_has_zero_differential() {
        let a = dual_numbers();
        let x = times_x(&a);
        let k = FdModule::top_of_regular(&a).unwrap();
        let t = tensor_complex(&x, &WindowComplex::concentrated(&k, 0)).unwrap();
        assert!(t.diff(1).unwrap().is_zero());
        assert_eq!(t.homology_dim(0).unwrap(), 1);
        assert_eq!(t.homology_dim(1).unwrap(), 1);
    }

    #[test]
    fn hom_into_regular_gives_socle() {
        let a = dual_numbers();
        let x = times_x(&a);
        let h = hom_complex(&x, &WindowComplex::concentrated(&FdModule::regular(&a), 0)).unwrap();
        // Hom(A →x A, A) in degrees 0, -1: H^0 = ker(x*) ≅ Hom(k, A) = k.
        assert_eq!(h.lo(), -1);
        assert_eq!(h.hi(), 0);
        assert_eq!(h.homology_dim(0).unwrap(), 1);
        assert_eq!(h.homology_dim(-1).unwrap(), 1);
    }

    #[test]
    fn truncations_recombine() {
        let a = dual_numbers();
        let r = FdModule::regular(&a);
        let xm = a.left_mult(1).clone();
        let x = WindowComplex::new(&a, 0, vec![r.clone(); 5], vec![xm; 4], Boundedness::Bounded).unwrap();
        for n in 0..=5 {
            let (inc, proj) = truncation_sequence(&x, n).unwrap();
            inc.verify().unwrap();
            proj.verify().unwrap();
            for d in 0..5 {
                let i = inc.component(d).unwrap();
                let q = proj.component(d).unwrap();
                // 0 → Tha → X → Thb → 0 is split exact in each degree.
                assert!(q.mul_unchecked(&i).is_zero());
                assert_eq!(i.rank() + q.rank(), x.term_dim(d).unwrap());
            }
        }
    }

    #[test]
    fn dump_roundtrip() {
        let a = dual_numbers();
        let x = times_x(&a);
        let k = FdModule::top_of_regular(&a).unwrap();
        let t = tensor_complex(&x, &WindowComplex::concentrated(&k, 0)).unwrap();
        let text = t.dump();
        let back = WindowComplex::parse_dump(&text).unwrap();
        assert_eq!(back.dump(), text);
        assert!(WindowComplex::parse_dump("complex p=2 lo=0 hi=0 tag=bounded\n").is_err());
    }

    #[test]
    fn rejects_nonzero_square() {
        let a = Algebra::field(3).unwrap();
        let v = vector_space(&a, 1);
        let one = FpMatrix::identity(3, 1);
        let err = WindowComplex::new(&a, 0, vec![v.clone(), v.clone(), v], vec![one.clone(), one], Boundedness::Bounded);
        assert!(matches!(err, Err(Error::ConstructionInvariant(_))));
    }
}

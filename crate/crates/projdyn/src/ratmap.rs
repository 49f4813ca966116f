//! Rational maps ℙⁿ ⇢ ℙᵐ as reduced tuples of equal-degree homogeneous
//! polynomials, with composition, iteration, degree sequences, the monomial
//! exponent-matrix fast path, and the map file format consumed by the CLI.

use crate::polyalg::{gcd_many, GaussianRational, HomoPoly, MPoly, PolyError};
use thiserror::Error;

/// Default cap on term counts produced by composition/iteration.
pub const TERM_CAP: usize = 1_000_000;

#[derive(Debug, Error)]
pub enum MapError {
    #[error("components have unequal degrees {0:?}")]
    DegreeMismatch(Vec<Option<u32>>),
    #[error("all components are zero")]
    AllZero,
    #[error("dimension mismatch: inner map targets P^{inner_target}, outer map is defined on P^{outer_source}")]
    DimensionMismatch {
        inner_target: usize,
        outer_source: usize,
    },
    #[error("composition collapsed: every component vanishes identically")]
    CollapsedComposition,
    #[error("term count {terms} exceeds the resource cap {cap}")]
    ResourceLimit { terms: usize, cap: usize },
    #[error("indeterminacy locus has a positive-dimensional component")]
    PositiveDimensionalLocus,
    #[error("self-map operation on a non-equidimensional map ({n} -> {m})")]
    NotSelfMap { n: usize, m: usize },
    #[error("map file: {0}")]
    MapFile(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("solver: {0}")]
    Solver(String),
}

/// A rational map in reduced form: the components share no common factor and
/// the first nonzero component is monic in graded-lex order.
#[derive(Clone, Debug)]
pub struct RationalMap {
    components: Vec<HomoPoly>,
    source_dim: usize,
    target_dim: usize,
    degree: u32,
    variables: Vec<String>,
}

impl RationalMap {
    /// Reduce a raw tuple: checks equal degrees, divides out the common
    /// factor of all components, and normalizes the overall scale.
    pub fn reduce(raw: Vec<HomoPoly>) -> Result<RationalMap, MapError> {
        let nvars = raw
            .first()
            .map(HomoPoly::num_vars)
            .ok_or(MapError::AllZero)?;
        let vars = default_variables(nvars);
        Self::reduce_named(raw, vars)
    }

    pub fn reduce_named(raw: Vec<HomoPoly>, variables: Vec<String>) -> Result<RationalMap, MapError> {
        if raw.is_empty() || raw.iter().all(HomoPoly::is_zero) {
            return Err(MapError::AllZero);
        }
        let nvars = raw[0].num_vars();
        assert!(raw.iter().all(|c| c.num_vars() == nvars));
        assert_eq!(variables.len(), nvars);
        let degrees: Vec<Option<u32>> = raw.iter().map(HomoPoly::degree).collect();
        let mut present = degrees.iter().flatten();
        let d0 = *present.next().unwrap();
        if !degrees.iter().flatten().all(|&d| d == d0) {
            return Err(MapError::DegreeMismatch(degrees));
        }

        let mpolys: Vec<MPoly> = raw.iter().map(|c| c.as_mpoly().clone()).collect();
        let reduced = if certified_coprime(&mpolys) {
            mpolys
        } else {
            let g = gcd_many(&mpolys);
            if g.is_constant() {
                mpolys
            } else {
                mpolys
                    .iter()
                    .map(|p| p.exact_div(&g).expect("gcd divides"))
                    .collect()
            }
        };

        // Canonical overall scale: first nonzero component monic.
        let lead_inv = reduced
            .iter()
            .find(|p| !p.is_zero())
            .and_then(|p| p.leading_term().map(|(_, c)| c.inverse().unwrap()))
            .unwrap();
        let components: Vec<HomoPoly> = reduced
            .iter()
            .map(|p| HomoPoly::try_new(p.scale(&lead_inv)).expect("reduction preserves grading"))
            .collect();

        let terms: usize = components.iter().map(HomoPoly::num_terms).sum();
        if terms > TERM_CAP {
            return Err(MapError::ResourceLimit {
                terms,
                cap: TERM_CAP,
            });
        }

        let degree = components.iter().find_map(HomoPoly::degree).unwrap();
        Ok(RationalMap {
            source_dim: nvars - 1,
            target_dim: components.len() - 1,
            degree,
            components,
            variables,
        })
    }

    /// Parse components in the polynomial grammar and reduce.
    pub fn from_strings(texts: &[&str], variables: &[&str]) -> Result<RationalMap, MapError> {
        let comps: Result<Vec<HomoPoly>, PolyError> = texts
            .iter()
            .map(|t| crate::polyalg::parse(t, variables))
            .collect();
        Self::reduce_named(comps?, variables.iter().map(|s| s.to_string()).collect())
    }

    pub fn identity(n: usize) -> RationalMap {
        let comps = (0..=n).map(|i| HomoPoly::variable(n + 1, i)).collect();
        RationalMap::reduce(comps).expect("identity is reduced")
    }

    pub fn components(&self) -> &[HomoPoly] {
        &self.components
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    /// δ₁: the common degree of the reduced components.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn variables(&self) -> Vec<&str> {
        self.variables.iter().map(String::as_str).collect()
    }

    pub fn is_self_map(&self) -> bool {
        self.source_dim == self.target_dim
    }

    fn require_self_map(&self) -> Result<(), MapError> {
        if self.is_self_map() {
            Ok(())
        } else {
            Err(MapError::NotSelfMap {
                n: self.source_dim,
                m: self.target_dim,
            })
        }
    }

    /// Q ∘ P by substitution, reduced after the substitution.
    pub fn compose(outer: &RationalMap, inner: &RationalMap) -> Result<RationalMap, MapError> {
        if inner.target_dim != outer.source_dim {
            return Err(MapError::DimensionMismatch {
                inner_target: inner.target_dim,
                outer_source: outer.source_dim,
            });
        }
        let inner_mp: Vec<MPoly> = inner.components.iter().map(|c| c.as_mpoly().clone()).collect();
        let mut raw = Vec::with_capacity(outer.components.len());
        let mut all_zero = true;
        for q in &outer.components {
            let s = q.as_mpoly().substitute(&inner_mp);
            if s.num_terms() > TERM_CAP {
                return Err(MapError::ResourceLimit {
                    terms: s.num_terms(),
                    cap: TERM_CAP,
                });
            }
            all_zero &= s.is_zero();
            raw.push(HomoPoly::try_new(s).expect("composition of homogeneous is homogeneous"));
        }
        if all_zero {
            return Err(MapError::CollapsedComposition);
        }
        RationalMap::reduce_named(raw, inner.variables.clone())
    }

    /// k-th iterate with reduction applied after every composition step.
    /// Monomial maps iterate in exponent arithmetic.
    pub fn iterate(&self, k: u32) -> Result<RationalMap, MapError> {
        self.require_self_map()?;
        assert!(k >= 1, "iterate requires k >= 1");
        if let Some(a) = self.exponent_matrix() {
            let mut acc = a.clone();
            for _ in 1..k {
                acc = ExponentMatrix::compose(&acc, &a)?;
            }
            return acc.to_map(self.variables.clone());
        }
        let mut acc = self.clone();
        for _ in 1..k {
            acc = RationalMap::compose(self, &acc)?;
        }
        Ok(acc)
    }

    /// δ₁ of the first `k_max` iterates.
    pub fn degree_sequence(&self, k_max: u32) -> Result<Vec<u64>, MapError> {
        self.require_self_map()?;
        let mut out = Vec::with_capacity(k_max as usize);
        if let Some(a) = self.exponent_matrix() {
            let mut acc = a.clone();
            out.push(acc.degree() as u64);
            for _ in 1..k_max {
                acc = ExponentMatrix::compose(&acc, &a)?;
                out.push(acc.degree() as u64);
            }
            return Ok(out);
        }
        let mut acc = self.clone();
        out.push(acc.degree() as u64);
        for _ in 1..k_max {
            acc = RationalMap::compose(self, &acc)?;
            out.push(acc.degree() as u64);
        }
        Ok(out)
    }

    /// The exponent matrix when every component is a unit monomial.
    pub fn exponent_matrix(&self) -> Option<ExponentMatrix> {
        let mut rows = Vec::with_capacity(self.components.len());
        for c in &self.components {
            let (e, coeff) = c.as_mpoly().as_monomial()?;
            if !coeff.is_one() {
                return None;
            }
            rows.push(e.clone());
        }
        Some(ExponentMatrix { rows })
    }

    /// Render the component tuple in the text grammar.
    pub fn render_components(&self) -> Vec<String> {
        let vars = self.variables();
        self.components.iter().map(|c| c.render(&vars)).collect()
    }
}

fn default_variables(nvars: usize) -> Vec<String> {
    (0..nvars).map(|i| format!("z{i}")).collect()
}

/// Sound one-sided coprimality certificate: a unit univariate GCD of the
/// line-restricted components mod a large prime proves the family coprime
/// over Q(i). Inconclusive results fall through to the exact GCD.
fn certified_coprime(polys: &[MPoly]) -> bool {
    let nonzero: Vec<&MPoly> = polys.iter().filter(|p| !p.is_zero()).collect();
    if nonzero.len() <= 1 || nonzero[0].nvars() < 2 {
        return false;
    }
    crate::polyalg::certified_coprime_mod(&nonzero)
}

/// Exponent matrix of a monomial map: row j holds the exponents of
/// component j. Composition and reduction act by integer arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentMatrix {
    rows: Vec<Vec<u32>>,
}

impl ExponentMatrix {
    pub fn new(rows: Vec<Vec<u32>>) -> Self {
        assert!(!rows.is_empty());
        let d: u32 = rows[0].iter().sum();
        assert!(
            rows.iter().all(|r| r.iter().sum::<u32>() == d),
            "rows must share a total degree"
        );
        ExponentMatrix { rows }
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn degree(&self) -> u32 {
        self.rows
            .first()
            .map(|r| r.iter().sum())
            .unwrap_or(0)
    }

    /// Matrix product A_outer · A_inner followed by min-subtraction reduction
    /// (the gcd of monomials is the componentwise minimum).
    pub fn compose(outer: &ExponentMatrix, inner: &ExponentMatrix) -> Result<ExponentMatrix, MapError> {
        let n_mid = inner.rows.len();
        let n_in = inner.rows[0].len();
        let mut rows = Vec::with_capacity(outer.rows.len());
        for orow in &outer.rows {
            assert_eq!(orow.len(), n_mid);
            let mut row = vec![0u64; n_in];
            for (k, &e) in orow.iter().enumerate() {
                for j in 0..n_in {
                    row[j] += e as u64 * inner.rows[k][j] as u64;
                }
            }
            rows.push(row);
        }
        // Reduce: subtract the columnwise minimum.
        let n_out = rows.len();
        for j in 0..n_in {
            let m = (0..n_out).map(|i| rows[i][j]).min().unwrap();
            for row in rows.iter_mut() {
                row[j] -= m;
            }
        }
        let rows_u32: Option<Vec<Vec<u32>>> = rows
            .into_iter()
            .map(|r| r.into_iter().map(|e| u32::try_from(e).ok()).collect())
            .collect();
        match rows_u32 {
            Some(rows) => Ok(ExponentMatrix { rows }),
            None => Err(MapError::ResourceLimit {
                terms: usize::MAX,
                cap: TERM_CAP,
            }),
        }
    }

    pub fn to_map(&self, variables: Vec<String>) -> Result<RationalMap, MapError> {
        let nvars = self.rows[0].len();
        let comps: Vec<HomoPoly> = self
            .rows
            .iter()
            .map(|r| HomoPoly::monomial(nvars, r.clone(), GaussianRational::one()))
            .collect();
        RationalMap::reduce_named(comps, variables)
    }

    /// Exponent matrix of the induced torus map in the affine chart where
    /// coordinate `chart` is 1: rows are differences against row `chart`,
    /// restricted to the non-chart columns.
    pub fn affine_matrix(&self, chart: usize) -> Vec<Vec<i64>> {
        let n = self.rows[0].len();
        (0..self.rows.len())
            .filter(|&i| i != chart)
            .map(|i| {
                (0..n)
                    .filter(|&j| j != chart)
                    .map(|j| self.rows[i][j] as i64 - self.rows[chart][j] as i64)
                    .collect()
            })
            .collect()
    }

    /// |det| of the affine-chart matrix: the topological degree of a
    /// dominant monomial self-map.
    pub fn topological_degree(&self) -> u64 {
        let b = self.affine_matrix(0);
        let b128: Vec<Vec<i128>> = b
            .iter()
            .map(|r| r.iter().map(|&x| x as i128).collect())
            .collect();
        crate::solve::snf::det_i128(&b128).unsigned_abs() as u64
    }
}

// ---------------------------------------------------------------------------
// Map file format
// ---------------------------------------------------------------------------

/// Parse the structured map file format:
///
/// ```text
/// # optional comments
/// n = 2
/// m = 2
/// variables = t, z, w
/// component = t^3
/// component = t*z^2
/// component = w^3
/// ```
pub fn parse_map_file(text: &str) -> Result<RationalMap, MapError> {
    let mut n: Option<usize> = None;
    let mut m: Option<usize> = None;
    let mut variables: Option<Vec<String>> = None;
    let mut component_texts: Vec<String> = Vec::new();
    for (lineno, raw_line) in text.lines().enumerate() {
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| MapError::MapFile(format!("line {}: expected `key = value`", lineno + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "n" => {
                n = Some(value.parse().map_err(|_| {
                    MapError::MapFile(format!("line {}: bad n `{value}`", lineno + 1))
                })?)
            }
            "m" => {
                m = Some(value.parse().map_err(|_| {
                    MapError::MapFile(format!("line {}: bad m `{value}`", lineno + 1))
                })?)
            }
            "variables" => {
                variables = Some(
                    value
                        .split(',')
                        .map(|v| v.trim().to_string())
                        .filter(|v| !v.is_empty())
                        .collect(),
                )
            }
            "component" => component_texts.push(value.to_string()),
            other => {
                return Err(MapError::MapFile(format!(
                    "line {}: unknown key `{other}`",
                    lineno + 1
                )))
            }
        }
    }
    let n = n.ok_or_else(|| MapError::MapFile("missing `n`".into()))?;
    let m = m.ok_or_else(|| MapError::MapFile("missing `m`".into()))?;
    let variables = variables.ok_or_else(|| MapError::MapFile("missing `variables`".into()))?;
    if variables.len() != n + 1 {
        return Err(MapError::MapFile(format!(
            "expected {} variables for P^{n}, found {}",
            n + 1,
            variables.len()
        )));
    }
    if component_texts.len() != m + 1 {
        return Err(MapError::MapFile(format!(
            "expected {} components for target P^{m}, found {}",
            m + 1,
            component_texts.len()
        )));
    }
    let var_refs: Vec<&str> = variables.iter().map(String::as_str).collect();
    let comps: Result<Vec<HomoPoly>, PolyError> = component_texts
        .iter()
        .map(|t| crate::polyalg::parse(t, &var_refs))
        .collect();
    RationalMap::reduce_named(comps?, variables)
}

pub fn render_map_file(map: &RationalMap) -> String {
    let mut out = String::new();
    out.push_str(&format!("n = {}\n", map.source_dim()));
    out.push_str(&format!("m = {}\n", map.target_dim()));
    out.push_str(&format!("variables = {}\n", map.variables().join(", ")));
    for c in map.render_components() {
        out.push_str(&format!("component = {c}\n"));
    }
    out
}

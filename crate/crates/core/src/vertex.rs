//! Vertex operator modes on `V_L` and its coset modules.
//!
//! Modes of `ι(e_α)` come from the exponential formula
//! `Y(ι(e_α), x) = E⁻(-α,x) E⁺(-α,x) e_α x^{α(0)}` with
//! `E^±(-α,x) = exp(∓ Σ_{n≷0} α(n) x^{-n} / n)` and
//! `e_α ι(e_γ) = ε(α,γ) ι(e_{α+γ})`.
//! Modes of a general monomial `b_{c_1}(-n_1) ··· ι(e_α)` come from the fully
//! normal ordered product of the fields `∂^{(n-1)} b_c(x)` with `Y(ι(e_α), x)`.
//! The recursion
//!
//! ```text
//! (b_c(-k) u)_m = Σ_{i≥0} C(k-1+i, i) [ b_c(-k-i) u_{m+i} + (-1)^{k+1} u_{m-k-i} b_c(i) ]
//! ```
//!
//! gives a second, independent route ([`ModeEngine::mode_by_recursion`]).

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::rc::Rc;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::VertexError;
use crate::fock::{basis_mode_act, heisenberg_act, weight_of, FockMonomial, Mode, StateVector};
use crate::lattice::{EvenLattice, LatticeVector, Sector};
use crate::lincomb::LinComb;
use crate::scalar::{binomial, factorial, floor, frac_int, q_frac, q_int, sign_pow, Frac, Q};

/// Caller-owned truncation: every produced term must have weight at most
/// `max_weight` and, if a box is given, lie in one of its sectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncationWindow {
    pub max_weight: Frac,
    pub sector_box: Option<BTreeSet<Sector>>,
}

impl TruncationWindow {
    pub fn up_to(max_weight: i64) -> Self {
        Self {
            max_weight: frac_int(max_weight),
            sector_box: None,
        }
    }

    pub fn with_sectors(max_weight: Frac, sectors: impl IntoIterator<Item = Sector>) -> Self {
        Self {
            max_weight,
            sector_box: Some(sectors.into_iter().collect()),
        }
    }

    pub fn check(&self, lattice: &EvenLattice, v: &StateVector) -> Result<(), VertexError> {
        for m in v.keys() {
            let w = weight_of(lattice, m);
            if w > self.max_weight {
                return Err(VertexError::WindowOverflow {
                    weight: w,
                    max_weight: self.max_weight,
                });
            }
            if let Some(b) = &self.sector_box {
                if !b.contains(&m.sector) {
                    return Err(VertexError::SectorOverflow);
                }
            }
        }
        Ok(())
    }
}

/// A single mode `v_m` of the vertex operator of `source`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModeOperator {
    pub source: StateVector,
    pub mode: i64,
}

impl ModeOperator {
    pub fn new(source: StateVector, mode: i64) -> Self {
        Self { source, mode }
    }

    pub fn apply(
        &self,
        engine: &mut ModeEngine<'_>,
        w: &StateVector,
    ) -> Result<StateVector, VertexError> {
        engine.apply(&self.source, self.mode, w)
    }
}

type CacheKey = (FockMonomial, i64, FockMonomial);

/// A polynomial in creation modes: sorted mode lists with coefficients.
type ModePoly = LinComb<Vec<Mode>>;

/// `E⁺(-α, x) w` split by the power `x^{-a}`: `(a, state)` pairs.
type Layers = Vec<(i64, StateVector)>;

/// Coefficients over a common denominator in machine integers:
/// `(denominator, [(key, numerator)])`.
type Scaled<K> = (i128, Vec<(K, i128)>);

fn scaled<'k, K: Clone + 'k>(terms: impl Iterator<Item = (&'k K, &'k Q)>) -> Option<Scaled<K>> {
    let terms: Vec<_> = terms.collect();
    let mut denom = 1i128;
    for (_, c) in &terms {
        let d = i128::try_from(c.denom()).ok()?;
        denom = (denom / denom.gcd(&d)).checked_mul(d)?;
    }
    terms
        .into_iter()
        .map(|(k, c)| {
            let n = i128::try_from(c.numer()).ok()?;
            let d = i128::try_from(c.denom()).ok()?;
            Some((k.clone(), n.checked_mul(denom / d)?))
        })
        .collect::<Option<Vec<_>>>()
        .map(|t| (denom, t))
}

/// Products `mono · modes` summed with machine-integer coefficients, or
/// `None` on overflow.
fn small_product(
    state: &Scaled<FockMonomial>,
    series: &Scaled<Vec<Mode>>,
) -> Option<Scaled<Vec<Mode>>> {
    let denom = state.0.checked_mul(series.0)?;
    let mut acc: HashMap<Vec<Mode>, i128> = HashMap::new();
    for (mono, c) in &state.1 {
        for (modes, p) in &series.1 {
            let slot = acc.entry(merge_modes(mono.modes(), modes)).or_insert(0);
            *slot = slot.checked_add(c.checked_mul(*p)?)?;
        }
    }
    Some((denom, acc.into_iter().filter(|(_, n)| *n != 0).collect()))
}

/// Sum of scaled combinations over their common denominator, or `None` on
/// overflow.
fn merge_scaled(parts: &[Scaled<Vec<Mode>>]) -> Option<Scaled<Vec<Mode>>> {
    let mut denom = 1i128;
    for (d, _) in parts {
        denom = (denom / denom.gcd(d)).checked_mul(*d)?;
    }
    let mut acc: HashMap<Vec<Mode>, i128> = HashMap::new();
    for (d, terms) in parts {
        let f = denom / d;
        for (modes, n) in terms {
            let slot = acc.entry(modes.clone()).or_insert(0);
            *slot = slot.checked_add(n.checked_mul(f)?)?;
        }
    }
    Some((denom, acc.into_iter().filter(|(_, n)| *n != 0).collect()))
}

/// A creation series together with its machine-integer form, where it fits.
struct CreationSeries {
    exact: Vec<ModePoly>,
    small: Vec<Option<Scaled<Vec<Mode>>>>,
}

fn merge_modes(a: &[Mode], b: &[Mode]) -> Vec<Mode> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    out.extend_from_slice(a);
    out.extend_from_slice(b);
    out.sort_unstable_by(|x, y| y.cmp(x));
    out
}

/// Product of two truncated series with [`ModePoly`] coefficients.
fn series_mul(a: &[ModePoly], b: &[ModePoly], dmax: usize) -> Vec<ModePoly> {
    let mut out = vec![ModePoly::zero(); dmax + 1];
    for (i, pa) in a.iter().enumerate().take(dmax + 1) {
        if pa.is_zero() {
            continue;
        }
        for (j, pb) in b.iter().enumerate().take(dmax + 1 - i) {
            for (ka, ca) in pa.iter() {
                for (kb, cb) in pb.iter() {
                    out[i + j].add_term(merge_modes(ka, kb), ca * cb);
                }
            }
        }
    }
    out
}

/// Evaluates modes `u_m w` on basis monomials, memoizing per `(u, m, w)`.
///
/// The cache is owned by the engine; create one engine per computation.
pub struct ModeEngine<'a> {
    lattice: &'a EvenLattice,
    window: TruncationWindow,
    cache: BTreeMap<CacheKey, StateVector>,
    e_minus: BTreeMap<Sector, Vec<ModePoly>>,
    e_plus: BTreeMap<(Sector, FockMonomial), Layers>,
    creation: BTreeMap<(Sector, Vec<Mode>), Rc<CreationSeries>>,
    omega: StateVector,
}

impl<'a> ModeEngine<'a> {
    pub fn new(lattice: &'a EvenLattice, window: TruncationWindow) -> Self {
        Self {
            lattice,
            window,
            cache: BTreeMap::new(),
            e_minus: BTreeMap::new(),
            e_plus: BTreeMap::new(),
            creation: BTreeMap::new(),
            omega: conformal_vector(lattice),
        }
    }

    pub fn lattice(&self) -> &'a EvenLattice {
        self.lattice
    }

    pub fn window(&self) -> &TruncationWindow {
        &self.window
    }

    pub fn conformal_vector(&self) -> &StateVector {
        &self.omega
    }

    /// Largest `j` for which `u_j w` can be nonzero (weights of the target
    /// sector are bounded below by `⟨α+γ,α+γ⟩/2`).
    pub fn vanishing_bound(&self, u: &FockMonomial, w: &FockMonomial) -> i64 {
        let l = self.lattice;
        let target = u.sector.add(&w.sector);
        floor(weight_of(l, u) + weight_of(l, w) - frac_int(1) - l.half_norm(&target))
    }

    /// `u_m w` on basis monomials.
    pub fn mode(
        &mut self,
        u: &FockMonomial,
        m: i64,
        w: &FockMonomial,
    ) -> Result<StateVector, VertexError> {
        if m > self.vanishing_bound(u, w) {
            return Ok(StateVector::zero());
        }
        let key = (u.clone(), m, w.clone());
        if let Some(v) = self.cache.get(&key) {
            return Ok(v.clone());
        }
        let out = self.normal_ordered_mode(u, m, w)?;
        self.window.check(self.lattice, &out)?;
        self.cache.insert(key, out.clone());
        Ok(out)
    }

    /// Bilinear extension of [`ModeEngine::mode`].
    pub fn apply(
        &mut self,
        u: &StateVector,
        m: i64,
        w: &StateVector,
    ) -> Result<StateVector, VertexError> {
        let mut out = StateVector::zero();
        for (um, uc) in u.iter() {
            for (wm, wc) in w.iter() {
                let img = self.mode(um, m, wm)?;
                out.add_scaled(&img, &(uc * wc));
            }
        }
        Ok(out)
    }

    /// `u_m` applied to a state vector, for a single monomial `u`.
    pub fn apply_monomial(
        &mut self,
        u: &FockMonomial,
        m: i64,
        w: &StateVector,
    ) -> Result<StateVector, VertexError> {
        let mut out = StateVector::zero();
        for (wm, wc) in w.iter() {
            let img = self.mode(u, m, wm)?;
            out.add_scaled(&img, wc);
        }
        Ok(out)
    }

    /// `L(n) = ω_{n+1}`.
    pub fn virasoro(&mut self, n: i64, w: &StateVector) -> Result<StateVector, VertexError> {
        let omega = self.omega.clone();
        self.apply(&omega, n + 1, w)
    }

    /// `(b_c(-k) u)_m w` through the recursion
    /// `Σ_i C(k-1+i, i) [b_c(-k-i) u_{m+i} w + (-1)^{k+1} u_{m-k-i} b_c(i) w]`,
    /// an evaluation route independent of the one used by [`ModeEngine::mode`].
    pub fn mode_by_recursion(
        &mut self,
        u: &FockMonomial,
        m: i64,
        w: &FockMonomial,
    ) -> Result<StateVector, VertexError> {
        let Some((first, rest)) = u.split_first() else {
            return self.mode(u, m, w);
        };
        let l = self.lattice;
        let k = first.depth as i64;
        let c = first.color;
        let mut out = StateVector::zero();
        let bound = self.vanishing_bound(&rest, w);
        let mut i = 0i64;
        while m + i <= bound {
            let inner = self.mode_by_recursion(&rest, m + i, w)?;
            let coeff = binomial(k - 1 + i, i as u64);
            for (mono, cf) in inner.iter() {
                out.add_scaled(&basis_mode_act(l, c, -k - i, mono), &(cf * &coeff));
            }
            i += 1;
        }
        let sign = q_int(sign_pow(k + 1));
        for i in 0..=(w.max_depth() as i64) {
            let lowered = basis_mode_act(l, c, i, w);
            let coeff = binomial(k - 1 + i, i as u64) * &sign;
            for (mono, cf) in lowered.iter() {
                let inner = self.mode_by_recursion(&rest, m - k - i, mono)?;
                out.add_scaled(&inner, &(cf * &coeff));
            }
        }
        Ok(out)
    }

    /// Degree `0..=dmax` coefficients of `E⁻(-α, x) = exp(Σ_{n>0} α(-n) x^n / n)`,
    /// from `d E_d = Σ_{n=1}^{d} α(-n) E_{d-n}`.
    fn e_minus_series(&mut self, alpha: &Sector, dmax: usize) -> &[ModePoly] {
        let series = self
            .e_minus
            .entry(alpha.clone())
            .or_insert_with(|| vec![ModePoly::basis(Vec::new())]);
        while series.len() <= dmax {
            let d = series.len();
            let mut next = ModePoly::zero();
            for n in 1..=d {
                for (color, a) in alpha.0.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    let mode = Mode::new(n as u32, color as u16);
                    for (key, c) in series[d - n].iter() {
                        next.add_term(merge_modes(key, &[mode]), c * q_frac(*a));
                    }
                }
            }
            series.push(next.scale(&Q::new(BigInt::one(), BigInt::from(d))));
        }
        &series[..=dmax]
    }

    /// `E⁻(-α, x) Π_j Σ_{t>=0} C(t+n_j-1, n_j-1) b_{c_j}(-t-n_j) x^t` up to `x^{dmax}`.
    fn creation_series(
        &mut self,
        alpha: &Sector,
        creators: &[Mode],
        dmax: usize,
    ) -> Rc<CreationSeries> {
        let key = (alpha.clone(), creators.to_vec());
        if let Some(series) = self.creation.get(&key) {
            if series.exact.len() > dmax {
                return series.clone();
            }
        }
        let mut series = self.e_minus_series(alpha, dmax).to_vec();
        for f in creators {
            let n = f.depth as i64;
            let factor: Vec<ModePoly> = (0..=dmax as i64)
                .map(|t| {
                    ModePoly::term(
                        vec![Mode::new((t + n) as u32, f.color)],
                        binomial(t + n - 1, (n - 1) as u64),
                    )
                })
                .collect();
            series = series_mul(&series, &factor, dmax);
        }
        let small = series.iter().map(|p| scaled(p.iter())).collect();
        let series = Rc::new(CreationSeries {
            exact: series,
            small,
        });
        self.creation.insert(key, series.clone());
        series
    }

    /// `E⁺(-α, x) w = Σ_a x^{-a} (state)`, with `E⁺(-α,x) = exp(-Σ_{n>0} α(n) x^{-n} / n)`.
    fn e_plus_layers(&mut self, alpha: &Sector, w: &FockMonomial) -> Layers {
        let key = (alpha.clone(), w.clone());
        if let Some(layers) = self.e_plus.get(&key) {
            return layers.clone();
        }
        let l = self.lattice;
        let mut layers: BTreeMap<i64, StateVector> = BTreeMap::new();
        layers.insert(0, StateVector::basis(w.clone()));
        if !alpha.is_zero() {
            for depth in 1..=w.max_depth() as i64 {
                let count = w
                    .modes()
                    .iter()
                    .filter(|md| md.depth as i64 == depth)
                    .count();
                if count == 0 {
                    continue;
                }
                let mut next: BTreeMap<i64, StateVector> = BTreeMap::new();
                for (a, state) in layers.iter() {
                    let mut cur = state.clone();
                    for kk in 0..=count as u64 {
                        let coeff = Q::new(
                            BigInt::from(sign_pow(kk as i64)),
                            BigInt::from(depth).pow(kk as u32) * factorial(kk),
                        );
                        next.entry(a + depth * kk as i64)
                            .or_default()
                            .add_scaled(&cur, &coeff);
                        cur = heisenberg_act(l, &alpha.0, depth, &cur);
                        if cur.is_zero() {
                            break;
                        }
                    }
                }
                layers = next;
            }
        }
        let layers: Layers = layers.into_iter().filter(|(_, s)| !s.is_zero()).collect();
        self.e_plus.insert(key, layers.clone());
        layers
    }

    /// `u_m w` for `u = b_{c_1}(-n_1) ··· b_{c_k}(-n_k) ι(e_α)` from the normal
    /// ordered product
    /// `Y(u, x) = : ∂^{(n_1-1)} b_{c_1}(x) ··· ∂^{(n_k-1)} b_{c_k}(x) Y(ι(e_α), x) :`,
    /// in which every `b(r)` with `r >= 0` stands to the right of `e_α x^{α(0)}`
    /// and every `b(r)` with `r < 0` to the left of `E⁻`.
    fn normal_ordered_mode(
        &mut self,
        u: &FockMonomial,
        m: i64,
        w: &FockMonomial,
    ) -> Result<StateVector, VertexError> {
        let l = self.lattice;
        let alpha = &u.sector;
        let a_int = alpha.to_ints().ok_or(VertexError::NotInLattice)?;
        let pairing = l.pair(alpha, &w.sector);
        debug_assert!(pairing.is_integer());
        let pairing = pairing.to_integer();
        let sign = q_int(l.cocycle().eval_on_sector(&a_int, &w.sector));
        let target_sector = alpha.add(&w.sector);
        // distinct factors with multiplicities; identical normal ordered
        // fields commute, so only how many of each go right matters
        let mut groups: Vec<(Mode, usize)> = Vec::new();
        for f in u.modes() {
            match groups.last_mut() {
                Some((g, mult)) if g == f => *mult += 1,
                _ => groups.push((*f, 1)),
            }
        }

        let mut out = StateVector::zero();
        let mut split = vec![0usize; groups.len()];
        loop {
            // annihilation parts `Σ_{r>=0} C(-r-1, n-1) b(r) x^{-r-n}` act first
            let mut annihilated: BTreeMap<(i64, FockMonomial), Q> = BTreeMap::new();
            let multiplicity: BigInt = groups
                .iter()
                .zip(&split)
                .map(|((_, mult), kappa)| binomial(*mult as i64, *kappa as u64).to_integer())
                .product();
            annihilated.insert((0, w.clone()), Q::from_integer(multiplicity));
            let mut creators = Vec::new();
            for ((f, mult), &kappa) in groups.iter().zip(&split) {
                creators.extend(core::iter::repeat_n(*f, mult - kappa));
                let n = f.depth as i64;
                for _ in 0..kappa {
                    let mut next: BTreeMap<(i64, FockMonomial), Q> = BTreeMap::new();
                    for ((e, state), c) in annihilated.iter() {
                        for r in 0..=state.max_depth() as i64 {
                            let coeff = binomial(-r - 1, (n - 1) as u64) * c;
                            for (img, d) in basis_mode_act(l, f.color, r, state).iter() {
                                let slot =
                                    next.entry((e - r - n, img.clone())).or_insert_with(Q::zero);
                                *slot += &coeff * d;
                            }
                        }
                    }
                    next.retain(|_, c| !c.is_zero());
                    annihilated = next;
                }
            }
            self.create_into(
                &mut out,
                alpha,
                pairing,
                &target_sector,
                m,
                &annihilated,
                &creators,
            );
            // next split in mixed radix
            let mut pos = 0;
            while pos < groups.len() && split[pos] == groups[pos].1 {
                split[pos] = 0;
                pos += 1;
            }
            if pos == groups.len() {
                break;
            }
            split[pos] += 1;
        }
        Ok(out.scale(&sign))
    }

    /// Adds `[creators] E⁻ e_α x^{α(0)} E⁺` applied to the annihilated states,
    /// at total power `x^{-m-1}`, into `out`.
    #[allow(clippy::too_many_arguments)]
    fn create_into(
        &mut self,
        out: &mut StateVector,
        alpha: &Sector,
        pairing: i64,
        target_sector: &Sector,
        m: i64,
        annihilated: &BTreeMap<(i64, FockMonomial), Q>,
        creators: &[Mode],
    ) {
        // remaining x-degree `D = c + Σ t_j` to be supplied by E⁻ and the creators
        let mut jobs: BTreeMap<usize, StateVector> = BTreeMap::new();
        for ((e, state), c) in annihilated.iter() {
            for (a, layer) in self.e_plus_layers(alpha, state) {
                let d = -m - 1 - e - pairing + a;
                if d >= 0 {
                    jobs.entry(d as usize).or_default().add_scaled(&layer, c);
                }
            }
        }
        let Some(&dmax) = jobs.keys().next_back() else {
            return;
        };
        let series = self.creation_series(alpha, creators, dmax);
        let mut acc: HashMap<Vec<Mode>, Q> = HashMap::new();
        let mut fast: Vec<Scaled<Vec<Mode>>> = Vec::new();
        for (d, state) in jobs {
            let product = series.small[d]
                .as_ref()
                .zip(scaled(state.iter()))
                .and_then(|(sp, st)| small_product(&st, sp));
            if let Some(p) = product {
                fast.push(p);
                continue;
            }
            for (mono, c) in state.iter() {
                for (modes, p) in series.exact[d].iter() {
                    let slot = acc
                        .entry(merge_modes(mono.modes(), modes))
                        .or_insert_with(Q::zero);
                    *slot += c * p;
                }
            }
        }
        match merge_scaled(&fast) {
            Some((denom, terms)) => {
                let denom = BigInt::from(denom);
                for (modes, n) in terms {
                    let slot = acc.entry(modes).or_insert_with(Q::zero);
                    *slot += Q::new(BigInt::from(n), denom.clone());
                }
            }
            None => {
                for (denom, terms) in fast {
                    for (modes, n) in terms {
                        let slot = acc.entry(modes).or_insert_with(Q::zero);
                        *slot += Q::new(BigInt::from(n), BigInt::from(denom));
                    }
                }
            }
        }
        for (modes, c) in acc {
            out.add_term(FockMonomial::new(target_sector.clone(), modes), c);
        }
    }
}

/// `Y(h(-1)1, x) = Σ h(m) x^{-m-1}`: the mode `m` is just `h(m)`.
pub fn heisenberg_field_mode(
    lattice: &EvenLattice,
    h: &[Frac],
    m: i64,
    w: &StateVector,
) -> StateVector {
    heisenberg_act(lattice, h, m, w)
}

pub fn lattice_field_mode(
    lattice: &EvenLattice,
    alpha: &LatticeVector,
    m: i64,
    w: &StateVector,
    window: &TruncationWindow,
) -> Result<StateVector, VertexError> {
    let mut engine = ModeEngine::new(lattice, window.clone());
    let top = FockMonomial::top(alpha.to_sector());
    engine.apply_monomial(&top, m, w)
}

pub fn general_vertex_mode(
    lattice: &EvenLattice,
    v: &StateVector,
    m: i64,
    w: &StateVector,
    window: &TruncationWindow,
) -> Result<StateVector, VertexError> {
    ModeEngine::new(lattice, window.clone()).apply(v, m, w)
}

/// `ω = ½ Σ_{i,j} (G⁻¹)_{ij} b_i(-1) b_j(-1) 1`, i.e. `½ Σ u_i(-1) uⁱ(-1) 1`
/// over a pair of dual bases of `𝔥`.
pub fn conformal_vector(lattice: &EvenLattice) -> StateVector {
    let r = lattice.rank();
    let inv = lattice.gram_inverse();
    let vac = FockMonomial::vacuum(r);
    let half = Frac::new(1, 2);
    let mut out = StateVector::zero();
    for (i, row) in inv.iter().enumerate() {
        for (j, g) in row.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            let mono = FockMonomial::new(
                vac.sector.clone(),
                vec![Mode::new(1, i as u16), Mode::new(1, j as u16)],
            );
            out.add_term(mono, q_frac(half * g));
        }
    }
    out
}

pub fn virasoro_mode(
    lattice: &EvenLattice,
    n: i64,
    w: &StateVector,
    window: &TruncationWindow,
) -> Result<StateVector, VertexError> {
    ModeEngine::new(lattice, window.clone()).virasoro(n, w)
}

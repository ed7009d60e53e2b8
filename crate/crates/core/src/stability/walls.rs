//! Walls, alpha-slopes with an infinitesimal polarization, GPB slopes and
//! destabilizing invariants at a wall.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};

use super::StabilityError;

pub type Q = Ratio<i64>;

/// Numerical data of a subsheaf `F` of a sheaf on a chain-extended curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SheafInvariants {
    /// Rank on the main component.
    pub r0: i64,
    /// Rank at the marked node.
    pub r_dag: i64,
    pub chi: i64,
    /// Ranks on the rational components; empty means `r0` on each.
    pub component_ranks: Vec<i64>,
}

impl SheafInvariants {
    pub fn new(r0: i64, r_dag: i64, chi: i64) -> Self {
        SheafInvariants {
            r0,
            r_dag,
            chi,
            component_ranks: Vec::new(),
        }
    }

    pub fn with_component_ranks(mut self, ranks: Vec<i64>) -> Self {
        self.component_ranks = ranks;
        self
    }
}

/// Weights `d_i` of the polarization on the rational components; the
/// main component gets `1 - eps |d|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polarization {
    pub d: Vec<i64>,
}

impl Polarization {
    pub fn uniform(n: usize) -> Self {
        Polarization { d: vec![1; n] }
    }
}

/// One witness `(chi0, r0, r_dag)` for a wall `alpha`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallSolution {
    pub alpha: Q,
    pub r0: i64,
    pub r_dag: i64,
    pub chi0: i64,
}

fn check_coprime(r: i64, chi: i64) -> Result<(), StabilityError> {
    if r < 2 {
        return Err(StabilityError::Rank(r));
    }
    if r.gcd(&chi) != 1 {
        return Err(StabilityError::NotCoprime { r, chi });
    }
    Ok(())
}

/// Admissible `(r0, r_dag)` pairs: `0 < r0 < r`, `0 <= r_dag <= r`,
/// `2 r0 - r <= r_dag <= 2 r0`.
fn rank_box(r: i64) -> impl Iterator<Item = (i64, i64)> {
    (1..r).flat_map(move |r0| {
        let lo = (2 * r0 - r).max(0);
        let hi = (2 * r0).min(r);
        (lo..=hi).map(move |rd| (r0, rd))
    })
}

/// All `alpha` in [0, 1) of the form `r0/(r0 - r_dag) (chi/r - chi0/r0)`
/// over the admissible box, sorted, one witness each.
pub fn lambda_set(r: i64, chi: i64) -> Result<Vec<WallSolution>, StabilityError> {
    check_coprime(r, chi)?;
    let mut out: Vec<WallSolution> = Vec::new();
    for (r0, rd) in rank_box(r) {
        if r0 == rd {
            continue;
        }
        let den = r0 - rd;
        let c = Q::new(r0 * chi, r);
        // alpha = (c - chi0)/den lies in [0, 1) for chi0 in a window of width |den|.
        let lo = (c - Q::from(den.abs())).floor().to_integer() - 1;
        let hi = (c + Q::from(den.abs())).ceil().to_integer() + 1;
        for chi0 in lo..=hi {
            let alpha = (c - Q::from(chi0)) / Q::from(den);
            if alpha < Q::zero() || alpha >= Q::from(1) {
                continue;
            }
            if out.iter().all(|w| w.alpha != alpha) {
                out.push(WallSolution {
                    alpha,
                    r0,
                    r_dag: rd,
                    chi0,
                });
            }
        }
    }
    out.sort_by_key(|a| a.alpha);
    Ok(out)
}

pub fn is_wall(r: i64, chi: i64, alpha: Q) -> Result<bool, StabilityError> {
    Ok(lambda_set(r, chi)?.iter().any(|w| w.alpha == alpha))
}

/// `rk_d F = (1 - eps |d|) r0 + eps sum d_i rk_i` as `(constant, eps coefficient)`.
fn weighted_rank(f: &SheafInvariants, pol: &Polarization) -> Result<(i64, i64), StabilityError> {
    let ranks: Vec<i64> = if f.component_ranks.is_empty() {
        vec![f.r0; pol.d.len()]
    } else {
        f.component_ranks.clone()
    };
    if ranks.len() != pol.d.len() {
        return Err(StabilityError::Components {
            expected: pol.d.len(),
            found: ranks.len(),
        });
    }
    let total: i64 = pol.d.iter().sum();
    let weighted: i64 = pol.d.iter().zip(&ranks).map(|(d, k)| d * k).sum();
    let (a, b) = (f.r0, weighted - total * f.r0);
    if a == 0 && b == 0 {
        return Err(StabilityError::ZeroRank);
    }
    Ok((a, b))
}

fn sign_of_linear(a: Q, b: Q) -> i32 {
    let lead = if !a.is_zero() { a } else { b };
    if lead.is_positive() {
        1
    } else if lead.is_negative() {
        -1
    } else {
        0
    }
}

/// Sign of `mu_d(F, alpha) - mu_d(E, alpha)` for all small enough `eps > 0`.
pub fn slope_compare(
    f: &SheafInvariants,
    e: &SheafInvariants,
    alpha: Q,
    pol: &Polarization,
) -> Result<Ordering, StabilityError> {
    let (af, bf) = weighted_rank(f, pol)?;
    let (ae, be) = weighted_rank(e, pol)?;
    let nf = Q::from(f.chi) - alpha * Q::from(f.r_dag);
    let ne = Q::from(e.chi) - alpha * Q::from(e.r_dag);
    // nf/(af + bf eps) - ne/(ae + be eps) over a common denominator.
    let n0 = nf * Q::from(ae) - ne * Q::from(af);
    let n1 = nf * Q::from(be) - ne * Q::from(bf);
    let s = sign_of_linear(n0, n1)
        * sign_of_linear(Q::from(af), Q::from(bf))
        * sign_of_linear(Q::from(ae), Q::from(be));
    Ok(s.cmp(&0))
}

/// As [`slope_compare`], refusing `alpha` on a wall of `Lambda_r` for
/// `E` of rank `r` and Euler characteristic `chi`.
pub fn slope_compare_strict(
    f: &SheafInvariants,
    e: &SheafInvariants,
    alpha: Q,
    pol: &Polarization,
    r: i64,
    chi: i64,
) -> Result<Ordering, StabilityError> {
    if is_wall(r, chi, alpha)? {
        return Err(StabilityError::OnWall(alpha.to_string()));
    }
    slope_compare(f, e, alpha, pol)
}

/// `(chi + (1 - alpha) r_plus) / rank`.
pub fn gpb_slope(chi: i64, r_plus: i64, rank: i64, alpha: Q) -> Result<Q, StabilityError> {
    if rank == 0 {
        return Err(StabilityError::ZeroRank);
    }
    Ok((Q::from(chi) + (Q::from(1) - alpha) * Q::from(r_plus)) / Q::from(rank))
}

/// Side of a wall on which a destabilizing subsheaf lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    /// Stable just below the wall, destabilized just above.
    SigmaMinus,
    /// Stable just above the wall, destabilized just below.
    SigmaPlus,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::SigmaMinus => "Sigma-",
            Side::SigmaPlus => "Sigma+",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DestabTriple {
    pub r0: i64,
    pub r_dag: i64,
    pub chi: i64,
    pub side: Side,
}

/// GPB data `(rank, chi, r_plus)` on the normalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GpbData {
    pub rank: i64,
    pub chi: i64,
    pub r_plus: i64,
}

impl DestabTriple {
    /// The GPB subbundle matching this subsheaf: the chain of rational curves
    /// contributes `2 r0 - r_dag` to chi and `r_dag` becomes `r_plus`.
    pub fn gpb(&self) -> GpbData {
        GpbData {
            rank: self.r0,
            chi: self.chi + 2 * self.r0 - self.r_dag,
            r_plus: self.r_dag,
        }
    }
}

/// Integer solutions of `(chi_F - wall r_dag)/r0 = (chi - wall r)/r` in the
/// admissible rank box, tagged by the side they destabilize.
pub fn destab_triples(r: i64, chi: i64, wall: Q) -> Result<Vec<DestabTriple>, StabilityError> {
    check_coprime(r, chi)?;
    if r > 3 {
        return Err(StabilityError::Unsupported(format!("rank {r} (at most 3)")));
    }
    if !is_wall(r, chi, wall)? {
        return Err(StabilityError::NotAWall(wall.to_string()));
    }
    let target = (Q::from(chi) - wall * Q::from(r)) / Q::from(r);
    let mut out = Vec::new();
    for (r0, rd) in rank_box(r) {
        if r0 == rd {
            continue;
        }
        let chi_f = target * Q::from(r0) + wall * Q::from(rd);
        if !chi_f.is_integer() {
            continue;
        }
        // d/d alpha of mu(F) - mu(E) is (r0 - r_dag)/r0.
        let side = if r0 > rd {
            Side::SigmaMinus
        } else {
            Side::SigmaPlus
        };
        out.push(DestabTriple {
            r0,
            r_dag: rd,
            chi: chi_f.to_integer(),
            side,
        });
    }
    out.sort();
    Ok(out)
}

/// Parses `p/q`, `p` or a decimal-free rational.
pub fn parse_rational(s: &str) -> Result<Q, StabilityError> {
    let bad = || StabilityError::Rational(s.to_string());
    let t = s.trim();
    match t.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from(t.parse::<i64>().map_err(|_| bad())?)),
    }
}

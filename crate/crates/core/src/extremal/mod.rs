//! Extremal affine surface areas: the symbolic 0/∞ table, certified
//! intervals, shape optimization, and product certificates.

mod bounds;
mod certificates;
mod ellipse;
mod optimize;

pub use bounds::{extremal_bounds, BoundsInterval, Endpoint, Provenance};
pub(crate) use bounds::inner_max_bounds;
pub(crate) use certificates::certificate_rows;
pub use certificates::{product_certificates, product_certificates_with, CertificateRow, Theorem, SANTALO_C};
pub use ellipse::{best_circumscribed_ellipse, best_inscribed_ellipse, EllipseFit};
pub use optimize::{optimize_extremal, Budget, Optimized};

use crate::error::{Error, Result};
use crate::funclass::{AdmissibleFunction, ClassFlags, Kind, Limit};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Which extremal functional. Every φ-kind is parameterized by the base
/// function φ; the starred kinds act through `φ*(t) = t φ(1/t)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExtremalKind {
    #[serde(rename = "IS_phi")]
    InnerMaxPhi,
    #[serde(rename = "is_phi")]
    InnerMinPhi,
    #[serde(rename = "OS_phi")]
    OuterMaxPhi,
    #[serde(rename = "os_phi")]
    OuterMinPhi,
    #[serde(rename = "IS_phi_star")]
    InnerMaxPhiStar,
    #[serde(rename = "OS_phi_star", alias = "IS_phi_star_of_polar")]
    OuterMaxPhiStar,
    #[serde(rename = "IS_psi")]
    InnerMaxPsi,
    #[serde(rename = "is_psi")]
    InnerMinPsi,
    #[serde(rename = "OS_psi")]
    OuterMaxPsi,
    #[serde(rename = "os_psi")]
    OuterMinPsi,
    #[serde(rename = "is_star_psi")]
    InnerMinStarPsi,
}

impl ExtremalKind {
    pub const ALL: [ExtremalKind; 11] = [
        ExtremalKind::InnerMaxPhi,
        ExtremalKind::InnerMinPhi,
        ExtremalKind::OuterMaxPhi,
        ExtremalKind::OuterMinPhi,
        ExtremalKind::InnerMaxPhiStar,
        ExtremalKind::OuterMaxPhiStar,
        ExtremalKind::InnerMaxPsi,
        ExtremalKind::InnerMinPsi,
        ExtremalKind::OuterMaxPsi,
        ExtremalKind::OuterMinPsi,
        ExtremalKind::InnerMinStarPsi,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            ExtremalKind::InnerMaxPhi => "IS_phi",
            ExtremalKind::InnerMinPhi => "is_phi",
            ExtremalKind::OuterMaxPhi => "OS_phi",
            ExtremalKind::OuterMinPhi => "os_phi",
            ExtremalKind::InnerMaxPhiStar => "IS_phi_star",
            ExtremalKind::OuterMaxPhiStar => "OS_phi_star",
            ExtremalKind::InnerMaxPsi => "IS_psi",
            ExtremalKind::InnerMinPsi => "is_psi",
            ExtremalKind::OuterMaxPsi => "OS_psi",
            ExtremalKind::OuterMinPsi => "os_psi",
            ExtremalKind::InnerMinStarPsi => "is_star_psi",
        }
    }

    /// Whether the functional takes a convex ψ.
    pub fn is_psi(self) -> bool {
        matches!(
            self,
            ExtremalKind::InnerMaxPsi
                | ExtremalKind::InnerMinPsi
                | ExtremalKind::OuterMaxPsi
                | ExtremalKind::OuterMinPsi
                | ExtremalKind::InnerMinStarPsi
        )
    }
}

impl fmt::Display for ExtremalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for ExtremalKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ExtremalKind::ALL
            .into_iter()
            .find(|k| k.tag() == s || (s == "IS_phi_star_of_polar" && *k == ExtremalKind::OuterMaxPhiStar))
            .ok_or_else(|| Error::Parameter(format!("unknown extremal kind `{s}`")))
    }
}

/// Symbolic classification of an extremal functional.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrivialClass {
    Finite,
    Zero,
    Infinite,
    /// Neither finiteness nor blow-up follows from the class data (a
    /// `Conc⁻` base whose `φ/√t` stays bounded at 0).
    Unresolved,
}

/// A φ-functional rewritten as `IS` or `OS` of a function `g`, where `g` is
/// either the `Conc⁻` base `b` or its dual `b*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct PhiReduction {
    pub outer: bool,
    /// `g = b*` rather than `g = b`.
    pub starred: bool,
    /// The given function is the dual of the base.
    pub given_is_dual: bool,
    pub base_limit_at_0: Limit,
}

pub(crate) fn reduce_phi(kind: ExtremalKind, flags: &ClassFlags) -> Result<PhiReduction> {
    let (outer, dual_of_given) = match kind {
        ExtremalKind::InnerMaxPhi => (false, false),
        ExtremalKind::OuterMaxPhi => (true, false),
        ExtremalKind::InnerMaxPhiStar => (false, true),
        ExtremalKind::OuterMaxPhiStar => (true, true),
        other => unreachable!("{other} is not a maximal φ-functional"),
    };
    let given_is_dual = if flags.in_conc_minus {
        false
    } else if flags.in_conc_plus {
        true
    } else {
        return Err(Error::ClassMismatch(format!(
            "{kind} needs φ in Conc⁻ or Conc⁺; φ(t)/√t is not strictly monotone"
        )));
    };
    // lim_{t→0} b(t)/√t is lim_{t→∞} f(t)/√t when b = f*
    let base_limit_at_0 = if given_is_dual { flags.limit_at_inf } else { flags.limit_at_0 };
    Ok(PhiReduction {
        outer,
        starred: dual_of_given != given_is_dual,
        given_is_dual,
        base_limit_at_0,
    })
}

/// Reproduces the finiteness tables for the extremal functionals.
pub fn classify_trivial(kind: ExtremalKind, f: &AdmissibleFunction, flags: &ClassFlags) -> Result<TrivialClass> {
    if kind.is_psi() {
        if f.kind() != Kind::Convex {
            return Err(Error::ClassMismatch(format!("{kind} takes a convex ψ, got concave {}", f.name())));
        }
        if !flags.in_conv {
            return Err(Error::ClassMismatch(format!("{} is not in Conv(0,∞)", f.name())));
        }
        return Ok(match kind {
            ExtremalKind::InnerMaxPsi | ExtremalKind::OuterMaxPsi => TrivialClass::Infinite,
            ExtremalKind::InnerMinPsi => TrivialClass::Zero,
            _ => TrivialClass::Finite,
        });
    }
    if f.kind() != Kind::Concave {
        return Err(Error::ClassMismatch(format!("{kind} takes a concave φ, got convex {}", f.name())));
    }
    if !flags.in_conc {
        return Err(Error::ClassMismatch(format!("{} is not in Conc(0,∞)", f.name())));
    }
    if matches!(kind, ExtremalKind::InnerMinPhi | ExtremalKind::OuterMinPhi) {
        return Ok(TrivialClass::Zero);
    }
    let red = reduce_phi(kind, flags)?;
    let infinite_limit = red.base_limit_at_0 == Limit::Infinite;
    Ok(match (red.outer, red.starred) {
        (false, false) | (true, true) => TrivialClass::Finite,
        _ if infinite_limit => TrivialClass::Infinite,
        _ => TrivialClass::Unresolved,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(f: &AdmissibleFunction) -> Vec<TrivialClass> {
        let flags = f.class_flags(2).unwrap();
        [
            ExtremalKind::InnerMaxPhi,
            ExtremalKind::InnerMaxPhiStar,
            ExtremalKind::InnerMinPhi,
            ExtremalKind::OuterMaxPhi,
            ExtremalKind::OuterMaxPhiStar,
            ExtremalKind::OuterMinPhi,
        ]
        .into_iter()
        .map(|k| classify_trivial(k, f, &flags).unwrap())
        .collect()
    }

    #[test]
    fn phi_table_with_infinite_limit() {
        use TrivialClass::*;
        let f = AdmissibleFunction::power_phi(2, 1.0).unwrap();
        assert_eq!(table(&f), vec![Finite, Infinite, Zero, Infinite, Finite, Zero]);
        // the same functionals seen from the dual side
        let d = f.dual();
        assert_eq!(table(&d), vec![Infinite, Finite, Zero, Finite, Infinite, Zero]);
    }

    #[test]
    fn phi_table_with_finite_limit() {
        use TrivialClass::*;
        let f = AdmissibleFunction::arctan(2).unwrap();
        assert_eq!(table(&f), vec![Finite, Unresolved, Zero, Unresolved, Finite, Zero]);
    }

    #[test]
    fn psi_table_and_mismatches() {
        use TrivialClass::*;
        let psi = AdmissibleFunction::power_psi(2, -1.0).unwrap();
        let flags = psi.class_flags(2).unwrap();
        let got: Vec<_> = [
            ExtremalKind::InnerMaxPsi,
            ExtremalKind::InnerMinPsi,
            ExtremalKind::OuterMaxPsi,
            ExtremalKind::OuterMinPsi,
            ExtremalKind::InnerMinStarPsi,
        ]
        .into_iter()
        .map(|k| classify_trivial(k, &psi, &flags).unwrap())
        .collect();
        assert_eq!(got, vec![Infinite, Zero, Infinite, Finite, Finite]);
        assert!(matches!(
            classify_trivial(ExtremalKind::InnerMaxPhi, &psi, &flags),
            Err(Error::ClassMismatch(_))
        ));
        let log = AdmissibleFunction::log1p();
        let lf = log.class_flags(2).unwrap();
        assert!(classify_trivial(ExtremalKind::InnerMaxPhi, &log, &lf).is_err());
        assert_eq!(classify_trivial(ExtremalKind::InnerMinPhi, &log, &lf).unwrap(), Zero);
    }

    #[test]
    fn kind_tags_round_trip() {
        for k in ExtremalKind::ALL {
            assert_eq!(k.tag().parse::<ExtremalKind>().unwrap(), k);
            assert_eq!(serde_json::to_string(&k).unwrap(), format!("\"{}\"", k.tag()));
        }
    }
}

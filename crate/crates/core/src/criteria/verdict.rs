//! Verdict types and the citation each reason carries.

use serde::{Deserialize, Serialize};

use super::salas::CriterionReport;
use crate::reach::DistanceProfile;
use crate::witness::{VerificationReport, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictKind {
    JClassCertified,
    HypercyclicCriterionPositive,
    Disqualified,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Reason {
    FiniteDimensional,
    SpectralRadiusBelowOne,
    SpectrumOutsideDisk,
    MissesUnitCircle,
    AdjointDirectSum,
    DeclaredCompact,
    DeclaredPositive,
    DeclaredHyponormal,
    PowerBoundedSmallLimitSet,
}

impl Reason {
    pub fn citation(self) -> &'static str {
        match self {
            Reason::FiniteDimensional => {
                "No operator on a finite-dimensional space is J-class: J(x) has empty interior for every nonzero x."
            }
            Reason::SpectralRadiusBelowOne => {
                "If r(T) < 1 then ||T^n|| -> 0, so J(x) = {0} for every x and T is not J-class."
            }
            Reason::SpectrumOutsideDisk => {
                "If the spectrum lies in {|z| > 1} then T^{-1} is power bounded with ||T^{-n}|| -> 0, \
                 so J(x) is empty for every nonzero x and T is not J-class."
            }
            Reason::MissesUnitCircle => "The spectrum of a J-class operator meets the unit circle.",
            Reason::AdjointDirectSum => "For any operator T on a Hilbert space, T ⊕ T* is not J-class.",
            Reason::DeclaredCompact => {
                "A compact operator on an infinite-dimensional Banach space is not J-class, since {0} is a \
                 component of its spectrum."
            }
            Reason::DeclaredPositive => "A positive operator on a Hilbert space is not J-class.",
            Reason::DeclaredHyponormal => "A hyponormal operator on a Hilbert space is not J-class.",
            Reason::PowerBoundedSmallLimitSet => {
                "If T is power bounded then J(x) = L(x) for every x; L(x) is bounded, so T is not J-class."
            }
        }
    }
}

pub const CERTIFIED_LINF_CITATION: &str =
    "For |lambda| > 1 the set of x in l^inf with J_{lambda B}(x) = l^inf is exactly c_0.";
pub const CERTIFIED_SUM_CITATION: &str = "If sigma(S) lies in {|z| > 1} and T is hypercyclic with hypercyclic \
vector y, then J(0 ⊕ y) is the whole space for S ⊕ T: (S ⊕ T)^k (S^{-k} u ⊕ y_k) = u ⊕ T^k y_k.";
pub const INCONCLUSIVE_CITATION: &str = "T is J-class when J(x) is the whole space for some nonzero x; \
no disqualifier or certifier applies, so the distance profile is reported as evidence.";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub kind: VerdictKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<Reason>,
    /// Further reasons that also apply, in pipeline order.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub also: Vec<Reason>,
    pub citation: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub criterion: Option<CriterionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<DistanceProfile>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

impl Verdict {
    fn bare(kind: VerdictKind, citation: &str) -> Verdict {
        Verdict {
            kind,
            reason: None,
            also: Vec::new(),
            citation: citation.to_string(),
            witness: None,
            verification: None,
            criterion: None,
            profile: None,
            notes: Vec::new(),
        }
    }

    /// Disqualified by the first reason; the rest go to `also`.
    pub fn disqualified(reasons: Vec<Reason>) -> Verdict {
        let mut it = reasons.into_iter();
        let first = it.next().expect("at least one reason");
        let mut v = Verdict::bare(VerdictKind::Disqualified, first.citation());
        v.reason = Some(first);
        v.also = it.collect();
        v
    }

    pub fn certified(citation: &str, witness: Witness, verification: VerificationReport) -> Verdict {
        let mut v = Verdict::bare(VerdictKind::JClassCertified, citation);
        v.witness = Some(witness);
        v.verification = Some(verification);
        v
    }

    pub fn criterion_positive(report: CriterionReport) -> Verdict {
        let mut v = Verdict::bare(VerdictKind::HypercyclicCriterionPositive, &report.citation);
        v.criterion = Some(report);
        v
    }

    pub fn inconclusive(profile: DistanceProfile) -> Verdict {
        let mut v = Verdict::bare(VerdictKind::Inconclusive, INCONCLUSIVE_CITATION);
        v.profile = Some(profile);
        v
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Verdict {
        self.notes.push(note.into());
        self
    }
}

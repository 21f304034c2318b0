//! Admissibility decision procedure.
//!
//! [`classify`] runs an ordered case analysis on θ and returns a
//! [`Certificate`] embedding every quantity the verdict rests on (χ, the
//! lattice distance and its witness, the integrality class), so a verdict can
//! be audited without re-running the procedure.
//!
//! For n ≥ 3 the rules are, in order: χ ≤ 0 rejects; d₁(ℤⁿₒ, θ−1) < 1
//! rejects; d > 1 accepts with non-coaxial holonomy; at d = 1 the verdict
//! depends on integrality (non-integral rejects, integral defers to the
//! polygon inequality, mixed is open).

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::angles::{divisor, euler_characteristic, integrality_class, AngleVector, IntegralityClass};
use crate::lattice::{compare_distance_to_one, nearest_odd, LatticeResult};
use crate::rational::RationalScalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("polygon inequality needs integral angles, θ[{index}] = {value} is not in ℕ")]
    NotIntegral { index: usize, value: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Admissible,
    NotAdmissible,
    Unknown,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Admissible => "Admissible",
            Self::NotAdmissible => "NotAdmissible",
            Self::Unknown => "Unknown",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The rule that decided a verdict. Exactly one fires per input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DecidingRule {
    RoundSphere,
    Teardrop,
    TroyanovFootball,
    PositivityViolated,
    HolonomyConstraintViolated,
    MondelloPanovSufficient,
    MainTheoremNonIntegral,
    KapovichIntegral,
    MixedCaseOpen,
}

impl DecidingRule {
    pub const ALL: [DecidingRule; 9] = [
        Self::RoundSphere,
        Self::Teardrop,
        Self::TroyanovFootball,
        Self::PositivityViolated,
        Self::HolonomyConstraintViolated,
        Self::MondelloPanovSufficient,
        Self::MainTheoremNonIntegral,
        Self::KapovichIntegral,
        Self::MixedCaseOpen,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::RoundSphere => "RoundSphere",
            Self::Teardrop => "Teardrop",
            Self::TroyanovFootball => "TroyanovFootball",
            Self::PositivityViolated => "PositivityViolated",
            Self::HolonomyConstraintViolated => "HolonomyConstraintViolated",
            Self::MondelloPanovSufficient => "MondelloPanovSufficient",
            Self::MainTheoremNonIntegral => "MainTheoremNonIntegral",
            Self::KapovichIntegral => "KapovichIntegral",
            Self::MixedCaseOpen => "MixedCaseOpen",
        }
    }

    /// Verdicts this rule is allowed to produce.
    pub fn permits(self, verdict: Verdict) -> bool {
        use Verdict::*;
        match self {
            Self::RoundSphere | Self::MondelloPanovSufficient => verdict == Admissible,
            Self::Teardrop | Self::TroyanovFootball | Self::KapovichIntegral => verdict != Unknown,
            Self::PositivityViolated | Self::HolonomyConstraintViolated | Self::MainTheoremNonIntegral => {
                verdict == NotAdmissible
            }
            Self::MixedCaseOpen => verdict == Unknown,
        }
    }
}

impl fmt::Display for DecidingRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HolonomyNote {
    NonCoaxialForced,
    CoaxialForced,
    NotApplicable,
}

impl HolonomyNote {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::NonCoaxialForced => "NonCoaxialForced",
            Self::CoaxialForced => "CoaxialForced",
            Self::NotApplicable => "NotApplicable",
        }
    }
}

impl fmt::Display for HolonomyNote {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub const NOTE_TEARDROP: &str =
    "n = 1 is decided as a football with an implicit second angle θ₂ = 1 (convention)";
pub const NOTE_SMALL_N: &str =
    "n ≤ 2 uses the classical two-point rule: admissible iff the two angles are equal";
pub const NOTE_THREE_POINTS: &str =
    "n = 3 also has explicit closed-form inequalities; the general rules are used here";
pub const NOTE_MIXED: &str =
    "d = 1 with mixed integrality is open; any metric realising θ would have coaxial holonomy";

/// Audit record for one call to [`classify`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "CertificateRecord", try_from = "CertificateRecord")]
pub struct Certificate {
    pub theta: AngleVector,
    pub verdict: Verdict,
    pub chi: RationalScalar,
    /// Present iff n ≥ 3.
    pub lattice: Option<LatticeResult>,
    pub integrality: IntegralityClass,
    /// Present iff the integral equality branch was evaluated.
    pub polygon_ok: Option<bool>,
    pub rule: DecidingRule,
    pub holonomy: HolonomyNote,
    pub notes: Vec<String>,
}

impl Certificate {
    pub fn n(&self) -> usize {
        self.theta.len()
    }

    pub fn distance(&self) -> Option<&RationalScalar> {
        self.lattice.as_ref().map(|l| &l.distance)
    }

    /// Internal consistency of the certificate fields.
    pub fn is_consistent(&self) -> bool {
        let n = self.n();
        let one = RationalScalar::one();
        let rule_ok = self.rule.permits(self.verdict);
        let lattice_ok = self.lattice.is_some() == (n >= 3);
        let polygon_ok = self.polygon_ok.is_some() == (self.rule == DecidingRule::KapovichIntegral);
        let holonomy_ok = match self.holonomy {
            HolonomyNote::NonCoaxialForced => {
                self.verdict == Verdict::Admissible && self.distance().is_some_and(|d| *d > one)
            }
            HolonomyNote::CoaxialForced => {
                self.verdict == Verdict::Admissible && self.distance().is_some_and(|d| *d == one)
            }
            HolonomyNote::NotApplicable => {
                !(self.verdict == Verdict::Admissible && self.distance().is_some_and(|d| *d >= one))
            }
        };
        let necessity_ok = self.verdict != Verdict::Admissible
            || n < 3
            || (self.chi.is_positive() && self.distance().is_some_and(|d| *d >= one));
        rule_ok && lattice_ok && polygon_ok && holonomy_ok && necessity_ok
    }
}

/// Decide admissibility of θ on the 2-sphere.
pub fn classify(theta: &AngleVector) -> Certificate {
    let beta = divisor(theta);
    let chi = euler_characteristic(&beta);
    let integrality = integrality_class(theta);
    let one = RationalScalar::one();
    let entries = theta.entries();

    let mut cert = Certificate {
        theta: theta.clone(),
        verdict: Verdict::Admissible,
        chi,
        lattice: None,
        integrality,
        polygon_ok: None,
        rule: DecidingRule::RoundSphere,
        holonomy: HolonomyNote::NotApplicable,
        notes: Vec::new(),
    };

    let decide = |cert: &mut Certificate, ok: bool| {
        cert.verdict = if ok { Verdict::Admissible } else { Verdict::NotAdmissible };
    };

    match entries.len() {
        0 => {}
        1 => {
            cert.rule = DecidingRule::Teardrop;
            decide(&mut cert, entries[0] == one);
            cert.notes.push(NOTE_TEARDROP.to_string());
            cert.notes.push(NOTE_SMALL_N.to_string());
        }
        2 => {
            cert.rule = DecidingRule::TroyanovFootball;
            decide(&mut cert, entries[0] == entries[1]);
            cert.notes.push(NOTE_SMALL_N.to_string());
        }
        n => {
            if n == 3 {
                cert.notes.push(NOTE_THREE_POINTS.to_string());
            }
            let lattice = nearest_odd(beta.entries()).expect("n ≥ 3");
            let comparison = compare_distance_to_one(&lattice);
            cert.lattice = Some(lattice);

            if !cert.chi.is_positive() {
                cert.rule = DecidingRule::PositivityViolated;
                cert.verdict = Verdict::NotAdmissible;
            } else {
                match comparison {
                    Ordering::Less => {
                        cert.rule = DecidingRule::HolonomyConstraintViolated;
                        cert.verdict = Verdict::NotAdmissible;
                    }
                    Ordering::Greater => {
                        cert.rule = DecidingRule::MondelloPanovSufficient;
                        cert.verdict = Verdict::Admissible;
                        cert.holonomy = HolonomyNote::NonCoaxialForced;
                    }
                    Ordering::Equal => match integrality {
                        IntegralityClass::AllNonIntegral => {
                            cert.rule = DecidingRule::MainTheoremNonIntegral;
                            cert.verdict = Verdict::NotAdmissible;
                        }
                        IntegralityClass::AllIntegral => {
                            let ok = polygon_holds(beta.entries());
                            cert.rule = DecidingRule::KapovichIntegral;
                            cert.polygon_ok = Some(ok);
                            decide(&mut cert, ok);
                            if ok {
                                cert.holonomy = HolonomyNote::CoaxialForced;
                            }
                        }
                        IntegralityClass::Mixed => {
                            cert.rule = DecidingRule::MixedCaseOpen;
                            cert.verdict = Verdict::Unknown;
                            cert.notes.push(NOTE_MIXED.to_string());
                        }
                        IntegralityClass::Empty => unreachable!("n ≥ 3"),
                    },
                }
            }
        }
    }
    cert
}

fn polygon_holds(beta: &[RationalScalar]) -> bool {
    let half_total = RationalScalar::half() * beta.iter().sum::<RationalScalar>();
    beta.iter().all(|b| *b <= half_total)
}

/// (θᵢ − 1) ≤ ½·Σⱼ(θⱼ − 1) for every 1 ≤ i ≤ n, for integral θ.
pub fn polygon_inequality(theta: &AngleVector) -> Result<bool, ClassifyError> {
    if let Some((index, value)) = theta.entries().iter().enumerate().find(|(_, t)| !t.is_natural()) {
        return Err(ClassifyError::NotIntegral {
            index,
            value: value.to_string(),
        });
    }
    Ok(polygon_holds(divisor(theta).entries()))
}

/// Wire form of a [`Certificate`]; field order is the stable JSON key order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateRecord {
    pub verdict: Verdict,
    pub n: usize,
    pub chi: RationalScalar,
    pub distance: Option<RationalScalar>,
    pub witness: Option<Vec<serde_json::Number>>,
    pub integrality: IntegralityClass,
    pub polygon_ok: Option<bool>,
    pub rule: DecidingRule,
    pub holonomy: HolonomyNote,
    pub theta: Vec<RationalScalar>,
    pub notes: Vec<String>,
}

impl From<Certificate> for CertificateRecord {
    fn from(c: Certificate) -> Self {
        let witness = c.lattice.as_ref().map(|l| {
            l.witness
                .iter()
                .map(|w| w.to_string().parse::<serde_json::Number>().expect("integer literal"))
                .collect()
        });
        Self {
            verdict: c.verdict,
            n: c.theta.len(),
            chi: c.chi,
            distance: c.lattice.map(|l| l.distance),
            witness,
            integrality: c.integrality,
            polygon_ok: c.polygon_ok,
            rule: c.rule,
            holonomy: c.holonomy,
            theta: c.theta.entries().to_vec(),
            notes: c.notes,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecordError {
    #[error("certificate field `{0}` is inconsistent with the rest of the record")]
    Inconsistent(&'static str),
    #[error("invalid theta in certificate: {0}")]
    Theta(String),
}

impl TryFrom<CertificateRecord> for Certificate {
    type Error = RecordError;

    fn try_from(r: CertificateRecord) -> Result<Self, Self::Error> {
        let theta = AngleVector::new(r.theta).map_err(|e| RecordError::Theta(e.to_string()))?;
        if theta.len() != r.n {
            return Err(RecordError::Inconsistent("n"));
        }
        let beta = divisor(&theta);
        if euler_characteristic(&beta) != r.chi {
            return Err(RecordError::Inconsistent("chi"));
        }
        let lattice = match (r.distance, r.witness) {
            (None, None) => None,
            (Some(distance), Some(witness)) => {
                let witness = witness
                    .iter()
                    .map(|w| w.to_string().parse::<BigInt>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| RecordError::Inconsistent("witness"))?;
                if witness.len() != theta.len() {
                    return Err(RecordError::Inconsistent("witness"));
                }
                let lattice = LatticeResult::from_witness(beta.entries(), witness);
                if lattice.distance != distance || !lattice.is_valid_for(beta.entries()) {
                    return Err(RecordError::Inconsistent("distance"));
                }
                Some(lattice)
            }
            _ => return Err(RecordError::Inconsistent("distance")),
        };
        let cert = Certificate {
            theta,
            verdict: r.verdict,
            chi: r.chi,
            lattice,
            integrality: r.integrality,
            polygon_ok: r.polygon_ok,
            rule: r.rule,
            holonomy: r.holonomy,
            notes: r.notes,
        };
        if integrality_class(&cert.theta) != cert.integrality {
            return Err(RecordError::Inconsistent("integrality"));
        }
        if !cert.is_consistent() {
            return Err(RecordError::Inconsistent("verdict"));
        }
        Ok(cert)
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verdict:     {}", self.verdict)?;
        writeln!(f, "rule:        {}", self.rule)?;
        writeln!(f, "theta:       {}", self.theta)?;
        writeln!(f, "n:           {}", self.n())?;
        writeln!(f, "chi:         {}", self.chi)?;
        match &self.lattice {
            Some(l) => {
                writeln!(f, "distance:    {}", l.distance)?;
                let w: Vec<String> = l.witness.iter().map(|x| x.to_string()).collect();
                writeln!(f, "witness:     [{}]", w.join(", "))?;
            }
            None => {
                writeln!(f, "distance:    -")?;
                writeln!(f, "witness:     -")?;
            }
        }
        writeln!(f, "integrality: {}", self.integrality)?;
        match self.polygon_ok {
            Some(ok) => writeln!(f, "polygon_ok:  {ok}")?,
            None => writeln!(f, "polygon_ok:  -")?,
        }
        writeln!(f, "holonomy:    {}", self.holonomy)?;
        for note in &self.notes {
            writeln!(f, "note:        {note}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angles::parse_angles;
    use proptest::prelude::*;

    fn cert(tokens: &[&str]) -> Certificate {
        classify(&parse_angles(tokens).unwrap())
    }

    fn q(n: i64, d: i64) -> RationalScalar {
        RationalScalar::new(n, d)
    }

    #[test]
    fn fixture_table() {
        use DecidingRule::*;
        use Verdict::*;
        let table: &[(&[&str], Verdict, DecidingRule)] = &[
            (&["1/2", "1/2"], Admissible, TroyanovFootball),
            (&["3/2", "1/2"], NotAdmissible, TroyanovFootball),
            (&["1/2", "1/2", "1/2"], Admissible, MondelloPanovSufficient),
            (&["3/2", "5/4", "5/4"], NotAdmissible, MainTheoremNonIntegral),
            (&["2", "2", "3"], Admissible, KapovichIntegral),
            (&["2", "2", "5"], NotAdmissible, KapovichIntegral),
            (&["2", "2", "2"], NotAdmissible, HolonomyConstraintViolated),
            (&["1/2", "1/2", "2"], Unknown, MixedCaseOpen),
            (&["1/2", "1/2", "1/2", "1/2"], NotAdmissible, PositivityViolated),
        ];
        for (tokens, verdict, rule) in table {
            let c = cert(tokens);
            assert_eq!((c.verdict, c.rule), (*verdict, *rule), "{tokens:?}");
            assert!(c.is_consistent(), "{tokens:?}");
        }
    }

    #[test]
    fn fixture_quantities() {
        let c = cert(&["1/2", "1/2", "1/2"]);
        assert_eq!(c.chi, q(1, 2));
        assert_eq!(c.distance(), Some(&q(3, 2)));
        assert_eq!(c.holonomy, HolonomyNote::NonCoaxialForced);

        let c = cert(&["3/2", "5/4", "5/4"]);
        assert_eq!(c.chi, q(3, 1));
        assert_eq!(c.distance(), Some(&q(1, 1)));

        let c = cert(&["2", "2", "3"]);
        assert_eq!(c.polygon_ok, Some(true));
        assert_eq!(c.holonomy, HolonomyNote::CoaxialForced);

        let c = cert(&["2", "2", "2"]);
        assert_eq!(c.distance(), Some(&q(0, 1)));

        let c = cert(&["1/2", "1/2", "2"]);
        assert_eq!(c.holonomy, HolonomyNote::NotApplicable);
        assert!(c.notes.iter().any(|n| n == NOTE_MIXED));
    }

    #[test]
    fn small_n_rules() {
        let c = classify(&AngleVector::empty());
        assert_eq!((c.verdict, c.rule), (Verdict::Admissible, DecidingRule::RoundSphere));
        assert_eq!(c.chi, q(2, 1));
        assert_eq!(c.integrality, IntegralityClass::Empty);

        assert_eq!(cert(&["1"]).verdict, Verdict::Admissible);
        let c = cert(&["3/2"]);
        assert_eq!((c.verdict, c.rule), (Verdict::NotAdmissible, DecidingRule::Teardrop));
        assert!(c.notes.iter().any(|n| n == NOTE_TEARDROP));
        assert!(c.lattice.is_none());

        assert!(cert(&["1/2", "1/2", "1/2"]).notes.iter().any(|n| n == NOTE_THREE_POINTS));
        assert!(!cert(&["1/2", "1/2", "1/2", "1/3"]).notes.iter().any(|n| n == NOTE_THREE_POINTS));
    }

    #[test]
    fn polygon_inequality_examples() {
        let p = |t: &[&str]| polygon_inequality(&parse_angles(t).unwrap());
        assert_eq!(p(&["2", "2", "3"]), Ok(true));
        assert_eq!(p(&["2", "2", "5"]), Ok(false));
        assert_eq!(p(&["1", "1", "1"]), Ok(true));
        assert!(matches!(p(&["2", "3/2"]), Err(ClassifyError::NotIntegral { index: 1, .. })));
    }

    #[test]
    fn round_sphere_with_marked_points_is_admissible() {
        let c = cert(&["1", "1", "1", "1"]);
        assert_eq!((c.verdict, c.rule), (Verdict::Admissible, DecidingRule::KapovichIntegral));
    }

    #[test]
    fn json_key_order_and_round_trip() {
        let c = cert(&["3/2", "5/4", "5/4"]);
        let json = serde_json::to_string(&c).unwrap();
        assert!(json.starts_with(
            r#"{"verdict":"NotAdmissible","n":3,"chi":"3","distance":"1","witness":[1,0,0],"integrality":"AllNonIntegral","polygon_ok":null,"rule":"MainTheoremNonIntegral","holonomy":"NotApplicable","theta":["3/2","5/4","5/4"]"#
        ), "{json}");
        let back: Certificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
        assert_eq!(serde_json::to_string(&back).unwrap(), json);
    }

    #[test]
    fn tampered_json_is_rejected() {
        let json = serde_json::to_string(&cert(&["3/2", "5/4", "5/4"])).unwrap();
        let tampered = json.replace(r#""distance":"1""#, r#""distance":"3/2""#);
        assert!(serde_json::from_str::<Certificate>(&tampered).is_err());
        let tampered = json.replace(r#""verdict":"NotAdmissible""#, r#""verdict":"Admissible""#);
        assert!(serde_json::from_str::<Certificate>(&tampered).is_err());
    }

    fn theta_strategy() -> impl Strategy<Value = AngleVector> {
        prop::collection::vec((1i64..80, 1i64..12).prop_map(|(n, d)| q(n, d)), 0..7)
            .prop_map(|v| AngleVector::new(v).unwrap())
    }

    proptest! {
        #[test]
        fn certificates_are_consistent(theta in theta_strategy()) {
            let c = classify(&theta);
            prop_assert!(c.is_consistent());
            prop_assert_eq!(&classify(&theta), &c);
            if c.verdict == Verdict::Unknown {
                prop_assert!(c.n() >= 3);
                prop_assert_eq!(c.integrality, IntegralityClass::Mixed);
                prop_assert_eq!(c.distance(), Some(&RationalScalar::one()));
            }
            let json = serde_json::to_string(&c).unwrap();
            let back: Certificate = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(serde_json::to_string(&back).unwrap(), json);
        }

        #[test]
        fn equal_pairs_are_admissible(n in 1i64..10_000, d in 1i64..10_000) {
            let t = q(n, d);
            let c = classify(&AngleVector::new(vec![t.clone(), t]).unwrap());
            prop_assert_eq!(c.verdict, Verdict::Admissible);
        }

        #[test]
        fn strict_case_is_stable(
            theta in theta_strategy(),
            raw in prop::collection::vec((-1000i64..1000, 1i64..1000), 7),
        ) {
            let c = classify(&theta);
            prop_assume!(c.rule == DecidingRule::MondelloPanovSufficient);
            let d = c.distance().unwrap().clone();
            let margin = std::cmp::min(d - RationalScalar::one(), c.chi.clone()) * RationalScalar::half();
            // scale a raw direction so its ℓ¹ size is strictly below the margin
            let direction: Vec<RationalScalar> = raw.iter().take(theta.len()).map(|&(n, k)| q(n, k)).collect();
            let size: RationalScalar = direction.iter().map(|e| e.abs()).sum();
            prop_assume!(size.is_positive());
            let scale = RationalScalar::from(margin.as_big() / size.as_big()) * RationalScalar::new(99, 100);
            let perturbed: Vec<RationalScalar> = theta.entries().iter().zip(&direction).map(|(t, e)| t + &(&scale * e)).collect();
            prop_assume!(perturbed.iter().all(|t| t.is_positive()));
            let moved = classify(&AngleVector::new(perturbed).unwrap());
            prop_assert_eq!(moved.verdict, Verdict::Admissible);
        }
    }
}

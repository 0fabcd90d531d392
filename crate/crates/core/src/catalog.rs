//! Built-in case catalog: the six worked examples (with the three B3
//! branches) as manifests, their pencil coefficients, flat charts in
//! implicit polynomial form, and the display data golden tests compare
//! against.
//!
//! Chart conventions: charts tagged `paper` keep the source coordinate
//! order, so their degree lists need not be ascending; the radical chart
//! displays were inverted once by hand into the polynomial form z = P(t)
//! and are verified exactly by `verify_chart` in the test suite.

use crate::arith::Coeff;
use crate::error::{Error, Result};
use crate::flatcoords::FlatChart;
use crate::poly::MPoly;
use crate::rootsys::Family;
use crate::textform::{parse_mpoly, VarSet};
use num_rational::BigRational;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ChartPolicy {
    Solve,
    Paper,
}

#[derive(Clone, Debug)]
pub struct CaseManifest {
    pub id: String,
    pub family: Family,
    pub rank: usize,
    pub marks: Vec<i64>,
    /// Pinned ansatz coefficients in deterministic ansatz order.
    pub pencil_coefficients: Option<Vec<Coeff>>,
    pub chart_policy: ChartPolicy,
    pub expected: Option<Expected>,
}

/// Golden reference values, as expression strings over z / t variables.
#[derive(Clone, Debug, Default)]
pub struct Expected {
    /// Contravariant pencil in generator coordinates.
    pub eta: Option<Vec<Vec<&'static str>>>,
    pub g: Option<Vec<Vec<&'static str>>>,
    /// The potential and unit-field components in chart coordinates.
    pub potential: Option<&'static str>,
    pub unit: Option<Vec<&'static str>>,
    /// Ascending degree spectrum.
    pub degrees: Option<Vec<&'static str>>,
    pub eflat: Option<&'static str>,
    pub stab_order: Option<usize>,
    pub stab_generators: Option<Vec<usize>>,
    /// The source's exact monodromy group, carried as an annotation.
    pub mono_annotation: Option<&'static str>,
    pub triviality: Option<&'static str>,
}

struct ChartSpec {
    p: &'static [&'static str],
    degrees: &'static [&'static str],
    /// None = unit antidiagonal; otherwise the full constant matrix rows.
    eta_normal: Option<&'static [&'static str]>,
}

fn chart_from_spec(spec: &ChartSpec, kappa: BigRational) -> FlatChart {
    let l = spec.p.len();
    let p: Vec<MPoly<Coeff>> =
        spec.p.iter().map(|s| parse_mpoly(s, VarSet::T, l).expect("catalog chart parses")).collect();
    let degrees: Vec<BigRational> =
        spec.degrees.iter().map(|s| BigRational::from_str(s).unwrap()).collect();
    let eta_normal: Vec<Vec<Coeff>> = match spec.eta_normal {
        None => (0..l)
            .map(|a| {
                (0..l)
                    .map(|b| if a + b == l - 1 { Coeff::one() } else { Coeff::zero() })
                    .collect()
            })
            .collect(),
        Some(rows) => rows
            .iter()
            .map(|row| row.split(',').map(|x| Coeff::parse(x.trim()).unwrap()).collect())
            .collect(),
    };
    FlatChart { p, degrees, eta_normal, kappa }
}

/// The flat chart of a catalog case in the source's coordinates.
pub fn paper_chart(id: &str) -> Result<FlatChart> {
    let (spec, kappa) = match id {
        "a1-w1" => (
            ChartSpec { p: &["sqrt(2)*t1"], degrees: &["1/2"], eta_normal: None },
            BigRational::from_integer(1.into()),
        ),
        "a2-w2" => (
            ChartSpec {
                p: &["3*t1", "t2 + 3/2*t1^2"],
                degrees: &["1/3", "2/3"],
                eta_normal: None,
            },
            BigRational::from_integer(1.into()),
        ),
        "c3-w3" => (
            ChartSpec {
                p: &[
                    "2*sqrt(3)*t2",
                    "4*t2^2 - 4*t1*t3",
                    "8/9*sqrt(3)*(t1^3 + t2^3 + t3^3 - 3*t1*t2*t3)",
                ],
                degrees: &["1", "1", "1"],
                eta_normal: None,
            },
            BigRational::from_integer(2.into()),
        ),
        "b3-w1-k1" => (
            ChartSpec {
                p: &[
                    "2*t1*t3 + 1/3*t2^2 + 1/3*t2*t3^3 + 1/120*t3^6",
                    "-8*t1*t3 - 4/3*t2^2 + 2/3*t2*t3^3 + 13/60*t3^6",
                    "t3^3",
                ],
                degrees: &["5/6", "1/2", "1/6"],
                eta_normal: Some(&["0,0,1", "0,3,0", "1,0,0"]),
            },
            BigRational::from_integer(1.into()),
        ),
        "b3-w1-k2" => (
            ChartSpec {
                p: &["2*t1*t3 - t2^2 + 2/3*t3^4", "4*t2^2 + 4*t3^4", "4*t3^2"],
                degrees: &["3/4", "1/2", "1/4"],
                eta_normal: None,
            },
            BigRational::from_integer(1.into()),
        ),
        "b3-w1-k3" => (
            ChartSpec {
                p: &["-2*t1*t3 + t2^2 - 2/3*t3^4", "4*t2^2 + 4*t3^4", "4*t2"],
                degrees: &["3/4", "1/2", "1/4"],
                eta_normal: None,
            },
            BigRational::from_integer(1.into()),
        ),
        "g2-w2" => (
            ChartSpec {
                p: &["-6*t1*t2", "729/4*t2^6 + 9*t1^2*t2^2"],
                degrees: &["2", "1"],
                eta_normal: None,
            },
            BigRational::from_integer(3.into()),
        ),
        "a3-w1w3" => (
            ChartSpec {
                p: &[
                    "1/6*t1^4 + t1^2*t2 + 1/2*t2^2 + t1*t3",
                    "2/3*t1^4 - t2^2 - 2*t1*t3",
                    "1/6*t1^4 - t1^2*t2 + 1/2*t2^2 + t1*t3",
                ],
                degrees: &["1/4", "1/2", "3/4"],
                eta_normal: None,
            },
            BigRational::from_integer(1.into()),
        ),
        other => return Err(Error::Other(format!("no catalog chart for {other:?}"))),
    };
    Ok(chart_from_spec(&spec, kappa))
}

fn coeffs(v: &[i64]) -> Option<Vec<Coeff>> {
    Some(v.iter().map(|&x| Coeff::from_int(x)).collect())
}

/// The built-in catalog, in a fixed order.
pub fn catalog() -> Vec<CaseManifest> {
    vec![
        CaseManifest {
            id: "a1-w1".into(),
            family: Family::A,
            rank: 1,
            marks: vec![1],
            pencil_coefficients: coeffs(&[]),
            chart_policy: ChartPolicy::Paper,
            expected: Some(Expected {
                eta: Some(vec![vec!["2"]]),
                g: Some(vec![vec!["-1/2*z1^2"]]),
                potential: Some("-1/24*t1^4"),
                unit: Some(vec!["-1/t1"]),
                degrees: Some(vec!["1/2"]),
                eflat: Some("-(d log z1)"),
                stab_order: Some(1),
                stab_generators: Some(vec![]),
                mono_annotation: Some("Mono = Z"),
                triviality: Some("EqualsBound"),
            }),
        },
        CaseManifest {
            id: "a2-w2".into(),
            family: Family::A,
            rank: 2,
            marks: vec![0, 1],
            pencil_coefficients: coeffs(&[]),
            chart_policy: ChartPolicy::Paper,
            expected: Some(Expected {
                eta: Some(vec![vec!["0", "3"], vec!["3", "2*z1"]]),
                g: Some(vec![
                    vec!["-2/3*z1^2 + 2*z2", "-1/3*z1*z2"],
                    vec!["-1/3*z1*z2", "-2/3*z2^2"],
                ]),
                potential: Some("1/18*t2^3 - 1/4*t1^2*t2^2 + 1/8*t1^4*t2 - 3/80*t1^6"),
                unit: Some(vec!["-2/(2*t2 + 3*t1^2)", "-6*t1/(2*t2 + 3*t1^2)"]),
                degrees: Some(vec!["1/3", "2/3"]),
                eflat: Some("-(d log z2)"),
                stab_order: Some(2),
                stab_generators: Some(vec![0]),
                mono_annotation: Some("Mono = Stab(omega) x| Z^2 = Z2 x| Z^2"),
                triviality: Some("EqualsBound"),
            }),
        },
        CaseManifest {
            id: "c3-w3".into(),
            family: Family::C,
            rank: 3,
            marks: vec![0, 0, 1],
            pencil_coefficients: coeffs(&[0, 0]),
            chart_policy: ChartPolicy::Paper,
            expected: Some(Expected {
                eta: Some(vec![
                    vec!["12", "8*z1", "4*z2"],
                    vec!["8*z1", "-8*z2 + 8*z1^2", "4*z1*z2 - 12*z3"],
                    vec!["4*z2", "4*z1*z2 - 12*z3", "-8*z1*z3 + 4*z2^2"],
                ]),
                g: Some(vec![
                    vec!["-z1^2 + 2*z2", "-z1*z2 + 3*z3", "-z1*z3"],
                    vec!["-z1*z2 + 3*z3", "-2*z2^2 + 2*z1*z3", "-2*z2*z3"],
                    vec!["-z1*z3", "-2*z2*z3", "-3*z3^2"],
                ]),
                potential: Some(
                    "-1/9*t1^3*t2 - 1/36*t2^4 - 1/3*t1*t2^2*t3 - 1/6*t1^2*t3^2 - 1/9*t2*t3^3",
                ),
                unit: Some(vec![
                    "3*(t1*t2 - t3^2)/(2*(t1^3 + t2^3 + t3^3 - 3*t1*t2*t3))",
                    "3*(t1*t3 - t2^2)/(2*(t1^3 + t2^3 + t3^3 - 3*t1*t2*t3))",
                    "3*(t2*t3 - t1^2)/(2*(t1^3 + t2^3 + t3^3 - 3*t1*t2*t3))",
                ]),
                degrees: Some(vec!["1", "1", "1"]),
                eflat: Some("-(1/2 d log z3)"),
                stab_order: Some(6),
                stab_generators: Some(vec![0, 1]),
                mono_annotation: Some("Mono = {e} x| Z^3"),
                triviality: Some("ProperSubgroupPossible"),
            }),
        },
        CaseManifest {
            id: "b3-w1-k1".into(),
            family: Family::B,
            rank: 3,
            marks: vec![1, 0, 0],
            pencil_coefficients: coeffs(&[6, -12]),
            chart_policy: ChartPolicy::Paper,
            expected: Some(Expected {
                eta: Some(vec![
                    vec!["12*z1 + 2*z2", "3*z3^2 - 16*z1", "6*z3"],
                    vec!["3*z3^2 - 16*z1", "-32*z2 - 12*z3^2 - 64*z1", "-24*z3"],
                    vec!["6*z3", "-24*z3", "0"],
                ]),
                g: Some(vec![
                    vec!["-z1^2", "-z1*z2", "-1/2*z1*z3"],
                    vec!["-z1*z2", "-2*z2^2 - 4*z1*z2 + 2*z1*z3^2", "2*z1*z3 - z2*z3"],
                    vec!["-1/2*z1*z3", "2*z1*z3 - z2*z3", "-3/4*z3^2 + 4*z1 + z2"],
                ]),
                potential: Some(
                    "t1^2*t2/(3*t3) - t1^2*t3^2/12 - 2*t1*t2^3/(27*t3^2) - 1/36*t1*t2^2*t3 \
                     + 1/360*t1*t2*t3^4 - t1*t3^7/30240 + t2^5/(135*t3^3) - t2^4/432 \
                     + t2^3*t3^3/2160 - t2^2*t3^6/8640 + t2*t3^9/172800 - t3^12/7603200",
                ),
                unit: Some(vec![
                    "-6*(40*t1 + 20*t2*t3^2 + t3^5)/(40*t2^2 + 240*t1*t3 + 40*t2*t3^3 + t3^6)",
                    "-6*(40*t2 + 20*t3^3)/(40*t2^2 + 240*t1*t3 + 40*t2*t3^3 + t3^6)",
                    "-240*t3/(40*t2^2 + 240*t1*t3 + 40*t2*t3^3 + t3^6)",
                ]),
                degrees: Some(vec!["1/6", "1/2", "5/6"]),
                eflat: Some("-(d log z1)"),
                stab_order: Some(8),
                stab_generators: Some(vec![1, 2]),
                mono_annotation: Some("Mono = Stab(omega) x| Z^3 = D4 x| Z^3"),
                triviality: None,
            }),
        },
        CaseManifest {
            id: "b3-w1-k2".into(),
            family: Family::B,
            rank: 3,
            marks: vec![1, 0, 0],
            pencil_coefficients: coeffs(&[2, 4]),
            chart_policy: ChartPolicy::Paper,
            expected: Some(Expected {
                eta: Some(vec![
                    vec!["4*z1 + 2*z2", "3*z3^2 - 4*z2", "4*z3"],
                    vec!["3*z3^2 - 4*z2", "16*z2 - 4*z3^2", "0"],
                    vec!["4*z3", "0", "0"],
                ]),
                g: Some(vec![
                    vec!["-z1^2", "-z1*z2", "-1/2*z1*z3"],
                    vec!["-z1*z2", "-2*z2^2 - 4*z1*z2 + 2*z1*z3^2", "2*z1*z3 - z2*z3"],
                    vec!["-1/2*z1*z3", "2*z1*z3 - z2*z3", "-3/4*z3^2 + 4*z1 + z2"],
                ]),
                potential: Some(
                    "-t2^4/48 + t1^3/(24*t3) - 1/4*t1*t2^2*t3 - t1^2*t3^2/12 \
                     + t2^2*t3^4/24 + t1*t3^5/180 - t3^8/2268",
                ),
                unit: Some(vec![
                    "(6*t1 + 8*t3^3)/(3*t2^2 - 6*t1*t3 - 2*t3^4)",
                    "-6*t2/(3*t2^2 - 6*t1*t3 - 2*t3^4)",
                    "6*t3/(3*t2^2 - 6*t1*t3 - 2*t3^4)",
                ]),
                degrees: Some(vec!["1/4", "1/2", "3/4"]),
                eflat: Some("-(d log z1)"),
                stab_order: Some(8),
                stab_generators: Some(vec![1, 2]),
                mono_annotation: Some("Mono = Stab(omega) x| Z^3 = D4 x| Z^3"),
                triviality: None,
            }),
        },
        CaseManifest {
            id: "b3-w1-k3".into(),
            family: Family::B,
            rank: 3,
            marks: vec![1, 0, 0],
            pencil_coefficients: coeffs(&[-2, 4]),
            chart_policy: ChartPolicy::Paper,
            expected: Some(Expected {
                eta: Some(vec![
                    vec!["-4*z1 + 2*z2", "3*z3^2 - 8*z2", "2*z3"],
                    vec!["3*z3^2 - 8*z2", "4*z3^2", "8*z3"],
                    vec!["2*z3", "8*z3", "16"],
                ]),
                g: None,
                potential: Some(
                    "-t2^4/48 + t1^3/(24*t3) - 1/4*t1*t2^2*t3 - t1^2*t3^2/12 \
                     + t2^2*t3^4/24 + t1*t3^5/180 - t3^8/2268",
                ),
                unit: None,
                degrees: Some(vec!["1/4", "1/2", "3/4"]),
                eflat: Some("-(d log z1)"),
                stab_order: Some(8),
                stab_generators: Some(vec![1, 2]),
                mono_annotation: Some("Mono = Stab(omega) x| Z^3 = D4 x| Z^3"),
                triviality: None,
            }),
        },
        CaseManifest {
            id: "g2-w2".into(),
            family: Family::G,
            rank: 2,
            marks: vec![0, 1],
            pencil_coefficients: coeffs(&[-6, -3, 12]),
            chart_policy: ChartPolicy::Paper,
            expected: Some(Expected {
                eta: Some(vec![
                    vec!["-12*z1", "3*z1^2 - 36*z2"],
                    vec!["3*z1^2 - 36*z2", "6*z1^3 - 36*z1*z2"],
                ]),
                g: Some(vec![
                    vec!["-2*z1^2 + 2*z2", "-3*z1*z2"],
                    vec!["-3*z1*z2", "-6*z2^2"],
                ]),
                potential: Some("t1^4/(2916*t2^2) - 1/8*t1^2*t2^2 + 81/320*t2^6"),
                unit: Some(vec![
                    "-2*(4*t1^2 + 243*t2^4)/(3*t2*(4*t1^2 + 81*t2^4))",
                    "-8*t1*t2/(3*t2*(4*t1^2 + 81*t2^4))",
                ]),
                degrees: Some(vec!["1", "2"]),
                eflat: Some("-(1/3 d log z2)"),
                stab_order: Some(2),
                stab_generators: Some(vec![0]),
                mono_annotation: Some("Mono = {e} x| Z^2"),
                triviality: Some("ProperSubgroupPossible"),
            }),
        },
        CaseManifest {
            id: "a3-w1w3".into(),
            family: Family::A,
            rank: 3,
            marks: vec![1, 0, 1],
            pencil_coefficients: coeffs(&[4, -6, 4]),
            chart_policy: ChartPolicy::Paper,
            expected: Some(Expected {
                eta: Some(vec![
                    vec!["6*z1 + 2*z2", "-3*z1 + 2*z2 + 3*z3", "z1 + z3"],
                    vec!["-3*z1 + 2*z2 + 3*z3", "-8*z1 - 12*z2 - 8*z3", "3*z1 + 2*z2 - 3*z3"],
                    vec!["z1 + z3", "3*z1 + 2*z2 - 3*z3", "2*z2 + 6*z3"],
                ]),
                g: None,
                potential: Some(
                    "-t1^8/18144 + t1^5*t3/720 - t2^6/(96*t1^4) - t1^4*t2^2/288 \
                     + t2^4*t3/(16*t1^3) - t2^2*t3^2/(8*t1^2) - t1^2*t3^2/24 \
                     - 1/24*t1*t2^2*t3 + t3^3/(24*t1) - t2^4/96",
                ),
                unit: Some(vec![
                    "(-12*t1^5 - 72*t3*t1^2 - 36*t2^2*t1)/((t1^4 - 6*t2*t1^2 + 6*t3*t1 + 3*t2^2)*(t1^4 + 6*t2*t1^2 + 6*t3*t1 + 3*t2^2))",
                    "(60*t2*t1^4 - 72*t2*t3*t1 - 36*t2^3)/((t1^4 - 6*t2*t1^2 + 6*t3*t1 + 3*t2^2)*(t1^4 + 6*t2*t1^2 + 6*t3*t1 + 3*t2^2))",
                    "(-8*t1^7 - 60*t3*t1^4 + 120*t2^2*t1^3 - 72*t3^2*t1 - 36*t2^2*t3)/((t1^4 - 6*t2*t1^2 + 6*t3*t1 + 3*t2^2)*(t1^4 + 6*t2*t1^2 + 6*t3*t1 + 3*t2^2))",
                ]),
                degrees: Some(vec!["1/4", "1/2", "3/4"]),
                eflat: Some("-(d log z1 + d log z3)"),
                stab_order: Some(2),
                stab_generators: Some(vec![1]),
                mono_annotation: Some("Mono = Stab(omega) x| Z^3 = Z2 x| Z^3"),
                triviality: None,
            }),
        },
    ]
}

pub fn find_case(id: &str) -> Option<CaseManifest> {
    catalog().into_iter().find(|c| c.id == id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flatcoords::verify_chart;
    use crate::geometry::{pushforward_metric, split_pencil};
    use crate::invariants::basic_generators;
    use crate::pencil::{instantiate, proper_ansatz};
    use crate::rootsys::{build_root_system, make_weight};
    use crate::weylgroup::generate_group;

    #[test]
    fn catalog_has_eight_ids() {
        let ids: Vec<String> = catalog().into_iter().map(|c| c.id).collect();
        assert_eq!(
            ids,
            vec![
                "a1-w1", "a2-w2", "c3-w3", "b3-w1-k1", "b3-w1-k2", "b3-w1-k3", "g2-w2",
                "a3-w1w3"
            ]
        );
    }

    /// Every catalog chart, including the hand-inverted radical displays,
    /// satisfies the implicit flat equation against its eta exactly.
    #[test]
    fn all_paper_charts_verify() {
        for case in catalog() {
            let rs = build_root_system(case.family, case.rank).unwrap();
            let wc = make_weight(&rs, &case.marks).unwrap();
            let group = generate_group(&rs).unwrap();
            let gens = basic_generators(&rs, &wc, &group);
            let fam = proper_ansatz(&gens, &wc);
            let coeffs = case.pencil_coefficients.clone().unwrap();
            let (z, _) = instantiate(&gens, &fam, &coeffs, &wc);
            let g_lam = pushforward_metric(&z, &rs, &wc, &group).unwrap();
            let (_, eta) = split_pencil(&g_lam).unwrap();
            let chart = paper_chart(&case.id).unwrap();
            let (ok, witness) = verify_chart(&chart, &eta).unwrap();
            assert!(ok, "{}: {witness:?}", case.id);
        }
    }
}

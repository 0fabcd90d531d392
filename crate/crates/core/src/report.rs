//! The full construction pipeline for one case and its canonical JSON
//! report. Reports hold every number as an exact canonical string and
//! round-trip through serde.

use crate::arith::Coeff;
use crate::catalog::{CaseManifest, ChartPolicy};
use crate::error::{Error, Result};
use crate::flatcoords::{degree_spectrum, solve_chart, verify_chart, DegreeSpectrum, FlatChart};
use crate::frobenius::{build_frobenius, verify_gfm, FrobeniusData, GfmReport};
use crate::geometry::{
    check_linearity, christoffel_pack, christoffel_consistency, curvature_is_zero, PolyMatrix,
};
use crate::invariants::{
    basic_generators, jacobian_determinant, verify_leading_terms, BasicGenerators,
    LeadingTermReport,
};
use crate::monodromy::{monodromy_bound, MonodromyBound, Triviality};
use crate::pencil::{proper_ansatz, solve_pencil, verify_assignment, GeneratorSet};
use crate::poly::MPoly;
use crate::ratfn::RationalFn;
use crate::rootsys::{build_root_system, make_weight, RootSystem, WeightChoice};
use crate::textform::{fourier_string, mpoly_string, ratfn_string, VarSet};
use crate::weylgroup::{generate_group, WeylGroup};
use serde::{Deserialize, Serialize};

/// One executed case (one generator-set branch of a manifest).
pub struct CaseRun {
    pub manifest: CaseManifest,
    pub rs: RootSystem,
    pub wc: WeightChoice,
    pub group: WeylGroup,
    pub gens: BasicGenerators,
    pub set: GeneratorSet,
    pub spectrum: DegreeSpectrum,
    pub chart: FlatChart,
    pub frob: FrobeniusData,
    pub mono: MonodromyBound,
    pub leading: LeadingTermReport,
    pub jacobian_ok: bool,
    pub gfm: GfmReport,
}

/// Runs the pipeline. Pinned pencil coefficients give exactly one branch;
/// otherwise every solution of the pencil search gets its own run.
pub fn run_case(manifest: &CaseManifest) -> Result<Vec<CaseRun>> {
    let rs = build_root_system(manifest.family, manifest.rank)?;
    let wc = make_weight(&rs, &manifest.marks)?;
    let group = generate_group(&rs)?;
    let gens = basic_generators(&rs, &wc, &group);
    let family = proper_ansatz(&gens, &wc);
    let sets: Vec<GeneratorSet> = match &manifest.pencil_coefficients {
        Some(coeffs) => {
            if coeffs.len() != family.unknowns() {
                return Err(Error::Other(format!(
                    "expected {} pencil coefficients, got {}",
                    family.unknowns(),
                    coeffs.len()
                )));
            }
            let set = verify_assignment(&rs, &wc, &group, &gens, &family, coeffs)?
                .ok_or(Error::NoSolution)?;
            vec![set]
        }
        None => solve_pencil(&rs, &wc, &group, &gens, &family, 0, 12)?,
    };
    let mut runs = Vec::new();
    for set in sets {
        let spectrum = degree_spectrum(&set.eta, &wc)?;
        let chart = match manifest.chart_policy {
            ChartPolicy::Paper => {
                let chart = crate::catalog::paper_chart(&manifest.id)?;
                let (ok, witness) = verify_chart(&chart, &set.eta)?;
                if !ok {
                    return Err(Error::Other(format!(
                        "catalog chart fails verification: {}",
                        witness.unwrap_or_default()
                    )));
                }
                chart
            }
            ChartPolicy::Solve => solve_chart(&set.eta, &spectrum, &wc)?,
        };
        // The chart's degree multiset must match the spectrum.
        let mut sorted = chart.degrees.clone();
        sorted.sort();
        if sorted != spectrum.d {
            return Err(Error::Other("chart degrees disagree with the spectrum".into()));
        }
        let frob = build_frobenius(&set.g, &chart, &wc)?;
        let gfm = verify_gfm(&frob);
        let mono = monodromy_bound(&group, &wc, &chart, &wc.theta)?;
        let leading = verify_leading_terms(&set.z, &wc);
        let jacobian_ok = jacobian_determinant(&set.z, &rs, &wc).is_ok();
        runs.push(CaseRun {
            manifest: manifest.clone(),
            rs: rs.clone(),
            wc: wc.clone(),
            group: group.clone(),
            gens: gens.clone(),
            set,
            spectrum,
            chart,
            frob,
            mono,
            leading,
            jacobian_ok,
            gfm,
        });
    }
    Ok(runs)
}

/// The heavier exact identity suite: curvature of both metrics, pencil
/// linearity, the contravariant-connection relations in generator
/// coordinates, and the flat-pencil relations in the chart.
pub fn property_checks(run: &CaseRun) -> Vec<(String, bool)> {
    let mut out = Vec::new();
    let l = run.rs.rank;
    out.push((
        "curvature(g) = 0".to_string(),
        curvature_is_zero(&run.set.g, l).unwrap_or(false),
    ));
    out.push((
        "curvature(eta) = 0".to_string(),
        curvature_is_zero(&run.set.eta, l).unwrap_or(false),
    ));
    out.push((
        "Gamma(g + lambda eta) affine".to_string(),
        check_linearity(&run.set.g, &run.set.eta).unwrap_or(false),
    ));
    for (name, metric) in [("g", &run.set.g), ("eta", &run.set.eta)] {
        let frac = metric.to_frac();
        let ok = christoffel_pack(&frac, l)
            .map(|pack| christoffel_consistency(&frac, &pack))
            .unwrap_or(false);
        out.push((format!("connection relations ({name})"), ok));
    }
    // Flat-pencil relations in the chart: dGamma symmetry, GammaGamma
    // commutation, and the eta-compatibility.
    let gamma = &run.frob.gamma;
    let mut dsym = true;
    let mut comm = true;
    let mut eta_comp = true;
    let eta_n = &run.chart.eta_normal;
    for a in 0..l {
        for b in 0..l {
            for g_ in 0..l {
                for d in 0..l {
                    if gamma[a][b][g_].derivative(d) != gamma[a][b][d].derivative(g_) {
                        dsym = false;
                    }
                    let mut lhs = RationalFn::zero(l);
                    let mut rhs = RationalFn::zero(l);
                    for e in 0..l {
                        lhs = lhs.add(&gamma[a][b][e].mul(&gamma[e][g_][d]));
                        rhs = rhs.add(&gamma[a][g_][e].mul(&gamma[e][b][d]));
                    }
                    if lhs != rhs {
                        comm = false;
                    }
                }
                let mut lhs = RationalFn::zero(l);
                let mut rhs = RationalFn::zero(l);
                for e in 0..l {
                    if !eta_n[a][e].is_zero() {
                        lhs = lhs.add(&gamma[e][b][g_].scale(&eta_n[a][e]));
                    }
                    if !eta_n[b][e].is_zero() {
                        rhs = rhs.add(&gamma[e][a][g_].scale(&eta_n[b][e]));
                    }
                }
                if lhs != rhs {
                    eta_comp = false;
                }
            }
        }
    }
    out.push(("dGamma symmetric in chart".to_string(), dsym));
    out.push(("Gamma Gamma commutation in chart".to_string(), comm));
    out.push(("eta compatibility of Gamma".to_string(), eta_comp));
    // e_a g^{ab} = (1/kappa) d_b t^b.
    let mut unit_g = true;
    for b in 0..l {
        let mut s = RationalFn::zero(l);
        for a in 0..l {
            s = s.add(&run.frob.omega_e[a].mul(&run.frob.g_t[a][b]));
        }
        let expect = RationalFn::from_poly(
            MPoly::var(l, b).scale(&Coeff::from_rat(&run.chart.degrees[b] / &run.wc.kappa)),
        );
        if s != expect {
            unit_g = false;
        }
    }
    out.push(("e_a g^{ab} = d_b t^b / kappa".to_string(), unit_g));
    // Degree pairing of the spectrum.
    let pairing_ok = (0..l).all(|a| {
        &run.spectrum.d[a] + &run.spectrum.d[l - 1 - a] == run.wc.kappa
    });
    out.push(("d_a + d_{l+1-a} = kappa".to_string(), pairing_ok));
    out
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MonodromyReport {
    pub stab_generators: Vec<usize>,
    pub stab_order: usize,
    pub group_label: String,
    pub bound_statement: String,
    pub triviality: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub annotation: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CheckEntry {
    pub name: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ManifoldReport {
    pub id: String,
    pub family: String,
    pub rank: usize,
    pub marks: Vec<i64>,
    pub kappa: String,
    pub theta: Vec<String>,
    pub pencil_coefficients: Vec<String>,
    pub generators: Vec<String>,
    pub s_corrections: Vec<String>,
    pub g_matrix: Vec<Vec<String>>,
    pub eta_matrix: Vec<Vec<String>>,
    pub degree_spectrum: Vec<String>,
    pub chart: Vec<String>,
    pub chart_degrees: Vec<String>,
    pub eta_normal: Vec<Vec<String>>,
    pub g_in_chart: Vec<Vec<String>>,
    pub potential: String,
    pub unit: Vec<String>,
    pub omega_e: Vec<String>,
    pub euler: Vec<String>,
    pub eflat: String,
    pub monodromy: MonodromyReport,
    pub verification: Vec<CheckEntry>,
}

/// Assembles the canonical report. `with_properties` adds the heavyweight
/// identity suite to the verification list.
pub fn to_report(run: &CaseRun, with_properties: bool) -> ManifoldReport {
    let l = run.rs.rank;
    let z_mat = |m: &PolyMatrix| -> Vec<Vec<String>> {
        m.entries
            .iter()
            .map(|row| row.iter().map(|e| mpoly_string(e, VarSet::Z)).collect())
            .collect()
    };
    let mut verification: Vec<CheckEntry> = Vec::new();
    verification.push(CheckEntry { name: "leading terms".into(), pass: run.leading.pass });
    verification.push(CheckEntry {
        name: "jacobian product formula".into(),
        pass: run.jacobian_ok,
    });
    for (name, pass) in &run.gfm.checks {
        verification.push(CheckEntry { name: name.clone(), pass: *pass });
    }
    if with_properties {
        for (name, pass) in property_checks(run) {
            verification.push(CheckEntry { name, pass });
        }
    }
    let triviality = match &run.mono.triviality {
        Triviality::EqualsBound => "EqualsBound".to_string(),
        Triviality::ProperSubgroupPossible(w) => format!("ProperSubgroupPossible({w})"),
        Triviality::Undetermined => "Undetermined".to_string(),
    };
    let annotation = run
        .manifest
        .expected
        .as_ref()
        .and_then(|e| e.mono_annotation.map(|s| s.to_string()));
    ManifoldReport {
        id: run.manifest.id.clone(),
        family: run.manifest.family.to_string(),
        rank: run.manifest.rank,
        marks: run.manifest.marks.clone(),
        kappa: run.wc.kappa.to_string(),
        theta: run.wc.theta.iter().map(|t| t.to_string()).collect(),
        pencil_coefficients: run.set.coefficients.iter().map(|c| c.canonical()).collect(),
        generators: run.set.z.iter().map(fourier_string).collect(),
        s_corrections: run
            .set
            .s
            .iter()
            .map(|s| mpoly_string(s, VarSet::YLambda))
            .collect(),
        g_matrix: z_mat(&run.set.g),
        eta_matrix: z_mat(&run.set.eta),
        degree_spectrum: run.spectrum.d.iter().map(|d| d.to_string()).collect(),
        chart: run.chart.p.iter().map(|p| mpoly_string(p, VarSet::T)).collect(),
        chart_degrees: run.chart.degrees.iter().map(|d| d.to_string()).collect(),
        eta_normal: run
            .chart
            .eta_normal
            .iter()
            .map(|row| row.iter().map(|c| c.canonical()).collect())
            .collect(),
        g_in_chart: (0..l)
            .map(|a| (0..l).map(|b| ratfn_string(&run.frob.g_t[a][b], VarSet::T)).collect())
            .collect(),
        potential: ratfn_string(&run.frob.potential, VarSet::T),
        unit: run.frob.unit.iter().map(|u| ratfn_string(u, VarSet::T)).collect(),
        omega_e: run.frob.omega_e.iter().map(|u| ratfn_string(u, VarSet::T)).collect(),
        euler: run.frob.euler.iter().map(|p| mpoly_string(p, VarSet::T)).collect(),
        eflat: run.frob.eflat.clone(),
        monodromy: MonodromyReport {
            stab_generators: run.mono.stab_generators.clone(),
            stab_order: run.mono.stab_order,
            group_label: run.mono.group_label.clone(),
            bound_statement: run.mono.bound_statement.clone(),
            triviality,
            annotation,
        },
        verification,
    }
}

impl ManifoldReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Other(format!("bad report JSON: {e}")))
    }
}

/// Frobenius data accessor used by the periods command.
pub fn frobenius_of(run: &CaseRun) -> &FrobeniusData {
    &run.frob
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::find_case;

    #[test]
    fn a1_report_round_trips() {
        let case = find_case("a1-w1").unwrap();
        let runs = run_case(&case).unwrap();
        assert_eq!(runs.len(), 1);
        let rep = to_report(&runs[0], false);
        let json = rep.to_json();
        let back = ManifoldReport::from_json(&json).unwrap();
        assert_eq!(rep, back);
        assert_eq!(rep.potential, "-1/24*t1^4");
        assert_eq!(rep.unit, vec!["(-1) / (t1)".to_string()]);
        assert!(rep.verification.iter().all(|c| c.pass));
    }

    #[test]
    fn a2_report_values() {
        let case = find_case("a2-w2").unwrap();
        let runs = run_case(&case).unwrap();
        let rep = to_report(&runs[0], false);
        assert_eq!(rep.degree_spectrum, vec!["1/3", "2/3"]);
        assert_eq!(rep.eta_matrix[0][1], "3");
        assert_eq!(rep.eta_matrix[1][1], "2*z1");
        assert_eq!(rep.eflat, "-(d log z2)");
        assert_eq!(rep.monodromy.stab_order, 2);
        assert_eq!(rep.monodromy.triviality, "EqualsBound");
        assert!(rep.verification.iter().all(|c| c.pass));
    }
}

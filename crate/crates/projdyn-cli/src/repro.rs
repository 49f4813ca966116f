//! Reproduction suite: regenerates the numeric behavior of the worked
//! examples (power maps, the mixed-degree map, the swapped map, the Cremona
//! involution) and reports expected vs computed per row.

use num_complex::Complex64;
use projdyn::degrees::{degree_table, topological_degree};
use projdyn::measures::{backward_tree, green_estimate, moment_discrepancy, pushforward,
    pairing_discrepancy, Reference};
use projdyn::projcore::ProjPoint;
use projdyn::proximity::{exceptional_scan, ScanFlag, Target};
use projdyn::ratmap::RationalMap;
use serde::Serialize;

#[derive(Serialize)]
pub struct ReproRow {
    pub name: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

pub struct ReproOutput {
    pub rows: Vec<ReproRow>,
    /// Deterministic data files: (file name, contents).
    pub files: Vec<(String, String)>,
}

const TZW: [&str; 3] = ["t", "z", "w"];

fn row(rows: &mut Vec<ReproRow>, name: &str, expected: impl ToString, computed: impl ToString) {
    let expected = expected.to_string();
    let computed = computed.to_string();
    let pass = expected == computed;
    rows.push(ReproRow {
        name: name.to_string(),
        expected,
        computed,
        pass,
    });
}

fn row_tol(rows: &mut Vec<ReproRow>, name: &str, bound: f64, computed: f64) {
    rows.push(ReproRow {
        name: name.to_string(),
        expected: format!("< {bound}"),
        computed: format!("{computed:.3e}"),
        pass: computed < bound,
    });
}

pub fn run(seed: u64) -> ReproOutput {
    let mut rows = Vec::new();
    let mut files = Vec::new();

    let squares = RationalMap::from_strings(&["t^2", "z^2", "w^2"], &TZW).unwrap();
    let q = RationalMap::from_strings(&["t^3", "t*z^2", "w^3"], &TZW).unwrap();
    let r = RationalMap::from_strings(&["t^3", "w^3", "t*z^2"], &TZW).unwrap();
    let cremona = RationalMap::from_strings(&["z*w", "t*w", "t*z"], &TZW).unwrap();

    // Degree tables.
    let table = degree_table(&q, 3, seed).unwrap();
    row(
        &mut rows,
        "mixed-degree map: delta1 over k=1..3",
        "[3, 9, 27]",
        format!("{:?}", table.iter().map(|t| t.d).collect::<Vec<_>>()),
    );
    row(
        &mut rows,
        "mixed-degree map: delta2 over k=1..3",
        "[6, 36, 216]",
        format!(
            "{:?}",
            table.iter().map(|t| t.lambda.unwrap()).collect::<Vec<_>>()
        ),
    );
    row(
        &mut rows,
        "mixed-degree map: delta2 < delta1^2 at k=1",
        "6 < 9",
        format!("{} < {}", table[0].lambda.unwrap(), table[0].d * table[0].d),
    );
    row(
        &mut rows,
        "swapped map: delta1 sequence (non-multiplicative)",
        "[3, 6, 18, 36]",
        format!("{:?}", r.degree_sequence(4).unwrap()),
    );
    row(
        &mut rows,
        "power map: delta2 = delta1^2 (holomorphic)",
        "4",
        topological_degree(&squares, 7, seed).unwrap(),
    );
    row(
        &mut rows,
        "involution: delta1, delta2",
        "(2, 1)",
        format!(
            "({}, {})",
            cremona.degree(),
            topological_degree(&cremona, 7, seed).unwrap()
        ),
    );
    let cc = RationalMap::compose(&cremona, &cremona).unwrap();
    row(&mut rows, "involution squared is the identity", "1", cc.degree());

    // Indeterminacy.
    let rep = q.indeterminacy_points(seed).unwrap();
    row(
        &mut rows,
        "mixed-degree map: indeterminacy count / total multiplicity",
        "(1, 3)",
        format!("({}, {})", rep.points.len(), rep.total_multiplicity),
    );
    let rep = cremona.indeterminacy_points(seed).unwrap();
    row(
        &mut rows,
        "involution: three coordinate indeterminacy points",
        "(3, 3)",
        format!("({}, {})", rep.points.len(), rep.total_multiplicity),
    );

    // Green closed forms at spot points.
    let g = green_estimate(
        &squares,
        10,
        2.0,
        &[vec![Complex64::new(2.0, 0.0), Complex64::new(0.5, 0.0)]],
    )
    .unwrap();
    row_tol(
        &mut rows,
        "power map: |G_10(2, 0.5) - log 4|",
        1e-3,
        (g.values[0].1.unwrap() - 4.0f64.ln()).abs(),
    );
    let g = green_estimate(
        &q,
        10,
        3.0,
        &[
            vec![Complex64::new(5.0, 0.0), Complex64::new(2.0, 0.0)],
            vec![Complex64::new(0.5, 0.0), Complex64::new(0.5, 0.0)],
        ],
    )
    .unwrap();
    row_tol(
        &mut rows,
        "mixed-degree map: |G_10(5, 2) - log 4| (base 3)",
        1e-2,
        (g.values[0].1.unwrap() - 4.0f64.ln()).abs(),
    );
    row_tol(
        &mut rows,
        "mixed-degree map: G_10 inside the polydisk",
        1e-2,
        g.values[1].1.unwrap().abs(),
    );

    // Backward tree: torus equidistribution and pushforward identity.
    let w = ProjPoint::from_affine(&[Complex64::new(1.3, 0.2), Complex64::new(0.8, -0.4)]);
    let tree5 = backward_tree(&q, &w, 5, seed).unwrap();
    row(&mut rows, "depth-5 tree atom count", "7776", tree5.measure.len());
    row_tol(
        &mut rows,
        "depth-5 tree: torus moment discrepancy (order 3)",
        0.1,
        moment_discrepancy(&tree5.measure, &Reference::TorusHaar, 3),
    );
    let tree4 = backward_tree(&q, &w, 4, seed).unwrap();
    let (pushed, _) = pushforward(&q, &tree5.measure);
    row_tol(
        &mut rows,
        "pushforward of depth-5 tree equals depth-4 tree",
        1e-9,
        pairing_discrepancy(&pushed, &tree4.measure, 1e-7),
    );
    files.push(("tree_depth5.csv".to_string(), tree5.measure.to_csv()));

    // Exceptional mini-scan on the power map: the coordinate pencils stand
    // out among random lines.
    let e = |i: usize| -> Target {
        let mut v = vec![Complex64::new(0.0, 0.0); 3];
        v[i] = Complex64::new(1.0, 0.0);
        Target::hyperplane(&v)
    };
    let mut targets = vec![e(0), e(1), e(2)];
    for p in projdyn::projcore::sample_fs(2, 4, seed ^ 0x5ca1) {
        targets.push(Target::hyperplane(p.coords()));
    }
    let scan = exceptional_scan(&squares, 1, &targets, 4, Some(1.3), 4000, seed, 1).unwrap();
    let flagged: Vec<usize> = scan
        .iter()
        .enumerate()
        .filter(|(_, r)| r.flag == ScanFlag::ExceptionalCandidate)
        .map(|(i, _)| i)
        .collect();
    row(
        &mut rows,
        "scan flags exactly the three coordinate pencils",
        "[0, 1, 2]",
        format!("{flagged:?}"),
    );
    files.push((
        "scan_lines.csv".to_string(),
        projdyn::proximity::scan_rows_to_csv(&scan),
    ));

    // z^2 on P^1: the depth-10 tree is the 1024th roots of unity.
    let sq1 = RationalMap::from_strings(&["z0^2", "z1^2"], &["z0", "z1"]).unwrap();
    let one = ProjPoint::from_affine(&[Complex64::new(1.0, 0.0)]);
    let t = backward_tree(&sq1, &one, 10, seed).unwrap();
    row_tol(
        &mut rows,
        "squaring on P^1: circle moment discrepancy of depth-10 tree",
        1e-12,
        moment_discrepancy(&t.measure, &Reference::CircleHaar, 4),
    );

    ReproOutput { rows, files }
}

pub fn render_table(rows: &[ReproRow]) -> String {
    let mut out = String::new();
    let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(10);
    for r in rows {
        out.push_str(&format!(
            "{:width$}  expected {:>14}  computed {:>14}  {}\n",
            r.name,
            r.expected,
            r.computed,
            if r.pass { "PASS" } else { "FAIL" },
        ));
    }
    let passed = rows.iter().filter(|r| r.pass).count();
    out.push_str(&format!("{passed}/{} rows pass\n", rows.len()));
    out
}

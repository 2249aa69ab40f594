use std::cmp::Ordering;
use std::error::Error;
use std::fs;
use std::path::Path;

use forestconn::exactnum::{
    compare_to_exp, from_natural, parse_rational, ratio, to_f64, ExpOrdering,
};
use forestconn::forestcount::{
    bracket_scan, egf_report, frag_count, frag_rows, renyi_table, scan_conjectures,
    verify_lemma_2_2, verify_lemma_3_1, verify_standard_inequality, CountTable,
};
use forestconn::graphcore::{
    alterable_closure, connected_fraction, equiv_classes, parse_graph_list, parse_literal,
    random_seed_class, verify_class_identity, verify_theorem, GraphClass, MAX_ENUM_N, MAX_VERIFY_N,
};
use forestconn::report::{Quantity, Report, ReportRow, Status, DISPLAY_TERMS};
use forestconn::sampler::{
    estimate_conn_prob, sample_weighted_tree, RngHandle, UniformForestSampler,
    WeightedForestSampler,
};
use forestconn::weightmodel::{
    conn_prob_weighted, forest_counts_by_component_count, forest_mass_total, kappa_distribution,
    mass, masses_by_component_count, rhs_gen1, rhs_theorem, tree_mass_total, verify_deduction,
    verify_kappa_ratio, verify_massk_all, BoundValue, Forest, WeightVector,
};

use crate::{ClassKind, Cli, Command, Common, Output, SampleKind};

type Result<T> = std::result::Result<T, Box<dyn Error>>;

fn guard(msg: impl Into<String>) -> Box<dyn Error> {
    msg.into().into()
}

fn precision(common: &Common) -> u32 {
    common.precision.unwrap_or(DISPLAY_TERMS)
}

/// Count table reaching `n_max`, read from and written back to `--cache`.
fn count_table(common: &Common, n_max: usize) -> Result<CountTable> {
    let Some(path) = &common.cache else {
        return Ok(CountTable::with_n_max(n_max));
    };
    let existed = path.exists();
    let mut table = if existed {
        CountTable::load(path)?
    } else {
        CountTable::new()
    };
    let before = table.n_max();
    table.extend_to(n_max);
    if !existed || table.n_max() > before {
        table.save(path)?;
    }
    Ok(table)
}

fn weights(s: &str) -> Result<WeightVector> {
    Ok(s.parse::<WeightVector>()?)
}

fn seed_class(
    common: &Common,
    n: usize,
    graphs: Option<&Path>,
    seeds: usize,
) -> Result<GraphClass> {
    if n == 0 || n > MAX_ENUM_N {
        return Err(guard(format!("n = {n} outside 1..={MAX_ENUM_N}")));
    }
    match graphs {
        Some(path) => {
            let list = parse_graph_list(&fs::read_to_string(path)?)?;
            if let Some(g) = list.iter().find(|g| g.n() != n) {
                return Err(guard(format!("seed graph {g} is not on {n} vertices")));
            }
            Ok(GraphClass::from_graphs(list))
        }
        None => {
            let mut rng = RngHandle::new(common.seed);
            Ok(random_seed_class(n, seeds, &mut rng)?)
        }
    }
}

pub fn run(cli: &Cli) -> Result<Output> {
    let common = &cli.common;
    let report = match &cli.command {
        Command::Counts { n_max } => counts(common, *n_max)?,
        Command::Frag { n, j } => frag(common, *n, *j)?,
        Command::Renyi { n_max } => renyi(common, *n_max)?,
        Command::Egf { k_max } => {
            egf_report(&count_table(common, *k_max)?, *k_max, precision(common))
        }
        Command::Lemma22 { n_max } => verify_lemma_2_2(&count_table(common, *n_max)?, *n_max)?,
        Command::Lemma31 { n_max } => verify_lemma_3_1(&count_table(common, *n_max)?, *n_max)?,
        Command::Bracket { j_max, n_max } => bracket_scan(*j_max, *n_max),
        Command::StandardIneq { n, j, n_max } => standard_ineq(*n, *j, *n_max)?,
        Command::Mass { weights: w, forest } => mass_rows(&weights(w)?, forest.as_deref())?,
        Command::WeightedConn { weights: w } => weighted_conn(&weights(w)?)?,
        Command::Massk {
            weights: w,
            k,
            t_max,
            w_max,
        } => match w {
            Some(w) => massk_single(&weights(w)?, *k)?,
            None => massk_grid(*t_max, *w_max)?,
        },
        Command::Kappa { weights: w } => kappa(&weights(w)?)?,
        Command::Rhs { n, alpha } => rhs(common, *n, alpha)?,
        Command::Deduction { n, n_max } => deduction(common, *n, *n_max)?,
        Command::Classes { n } => classes(*n)?,
        Command::ClassIdentity { n } => verify_class_identity(*n)?,
        Command::Theorem {
            class,
            n,
            graphs,
            seeds,
        } => theorem(common, *class, *n, graphs.as_deref(), *seeds)?,
        Command::Closure { n, graphs, seeds } => closure(common, *n, graphs.as_deref(), *seeds)?,
        Command::Sample {
            kind,
            n,
            weights: w,
            count,
        } => return sample(common, *kind, *n, w.as_deref(), *count).map(Output::Lines),
        Command::Estimate { n, samples } => estimate(common, *n, *samples)?,
        Command::ScanConjectures { n_max } => {
            scan_conjectures(&count_table(common, *n_max)?, *n_max)?
        }
    };
    Ok(Output::Report(report))
}

fn counts(common: &Common, n_max: usize) -> Result<Report> {
    if n_max == 0 {
        return Err(guard("n_max must be at least 1"));
    }
    let table = count_table(common, n_max)?;
    Ok((1..=n_max)
        .map(|n| {
            ReportRow::new("counts", Status::Pass)
                .param("n", n)
                .lhs(Quantity::natural(table.forests(n)))
                .rhs(Quantity::natural(&table.trees(n)))
                .note("lhs forests, rhs trees")
        })
        .collect())
}

fn frag(common: &Common, n: usize, j: Option<usize>) -> Result<Report> {
    if n == 0 {
        return Err(guard("n must be at least 1"));
    }
    let table = count_table(common, n)?;
    match j {
        None => Ok(frag_rows(&table, n)),
        Some(j) => {
            let count = frag_count(&table, n, j)?;
            Ok(std::iter::once(
                ReportRow::new("frag", Status::Pass)
                    .param("n", n)
                    .param("j", j)
                    .lhs(Quantity::natural(&count)),
            )
            .collect())
        }
    }
}

fn renyi(common: &Common, n_max: usize) -> Result<Report> {
    if n_max == 0 {
        return Err(guard("n_max must be at least 1"));
    }
    let table = count_table(common, n_max)?;
    let half = ratio(1, 2);
    Ok(renyi_table(&table, n_max)
        .into_iter()
        .map(|row| {
            let note = match compare_to_exp(&row.prob, &half) {
                ExpOrdering::Less => "below e^(-1/2)",
                ExpOrdering::Greater => "above e^(-1/2)",
                ExpOrdering::Undecidable => "undecided against e^(-1/2)",
            };
            ReportRow::new("renyi", Status::Pass)
                .param("n", row.n)
                .lhs(Quantity::rational(&row.prob))
                .rhs(Quantity::exp(&-&half))
                .note(note)
        })
        .collect())
}

fn standard_ineq(n: Option<usize>, j: Option<usize>, n_max: usize) -> Result<Report> {
    let pairs: Vec<(usize, usize)> = match (n, j) {
        (Some(n), Some(j)) => vec![(n, j)],
        _ => (2..=n_max)
            .flat_map(|n| (1..n).map(move |j| (n, j)))
            .collect(),
    };
    let mut report = Report::new();
    for (n, j) in pairs {
        let holds = verify_standard_inequality(n, j)?;
        let lhs = ratio((n - j) as i64, n as i64).pow((n - j) as i32);
        let row = ReportRow::new(
            "standard_ineq",
            if holds { Status::Pass } else { Status::Fail },
        )
        .param("n", n)
        .param("j", j)
        .lhs(Quantity::rational(&lhs))
        .rhs(Quantity::exp(&ratio(-(j as i64), 1)));
        report.push(row);
    }
    Ok(report)
}

fn mass_rows(w: &WeightVector, forest: Option<&str>) -> Result<Report> {
    let mut report = Report::new();
    if let Some(lit) = forest {
        let (t, edges) = parse_literal(lit)?;
        let f = Forest::new(t, edges)?;
        report.push(
            ReportRow::new("mass", Status::Pass)
                .param("weights", w)
                .param("forest", f.to_literal())
                .lhs(Quantity::natural(&mass(&f, w)?)),
        );
    }
    let trees = from_natural(&tree_mass_total(w));
    let cayley = from_natural(&w.product()) * ratio(w.total() as i64, 1).pow(w.t() as i32 - 2);
    report.push(
        ReportRow::new(
            "tree_mass_total",
            if trees == cayley {
                Status::Pass
            } else {
                Status::Fail
            },
        )
        .param("weights", w)
        .lhs(Quantity::rational(&trees))
        .rhs(Quantity::rational(&cayley))
        .note("rhs is prod(n_i) n^(t-2)"),
    );
    report.push(
        ReportRow::new("forest_mass_total", Status::Pass)
            .param("weights", w)
            .lhs(Quantity::natural(&forest_mass_total(w)?)),
    );
    Ok(report)
}

fn weighted_conn(w: &WeightVector) -> Result<Report> {
    let p = conn_prob_weighted(w)?;
    let t_over_n = ratio(w.t() as i64, w.total() as i64);
    let status = match compare_to_exp(&p, &t_over_n) {
        ExpOrdering::Greater => Status::Pass,
        ExpOrdering::Less => Status::Fail,
        ExpOrdering::Undecidable => Status::Flag,
    };
    Ok(std::iter::once(
        ReportRow::new("weighted_conn", status)
            .param("weights", w)
            .lhs(Quantity::rational(&p))
            .rhs(Quantity::exp(&-t_over_n))
            .note("lhs = tree mass / forest mass, bounded below by e^(-t/n)"),
    )
    .collect())
}

fn massk_rows(w: &WeightVector, k: Option<usize>) -> Result<Vec<ReportRow>> {
    let t = w.t();
    if t < 3 {
        return Err(guard(format!("massk needs t >= 3, got t = {t}")));
    }
    let counts = forest_counts_by_component_count(t)?;
    let masses = masses_by_component_count(w)?;
    let verdicts = verify_massk_all(w, &counts)?;
    let ks: Vec<usize> = match k {
        Some(k) if k == 0 || k > t => {
            return Err(guard(format!("k = {k} outside 1..={t}")));
        }
        Some(k) => vec![k],
        None => (1..=t).collect(),
    };
    let n = w.total() as i64;
    let scale = ratio(n, t as i64).pow((t - 2) as i32) * from_natural(&w.product());
    Ok(ks
        .into_iter()
        .map(|k| {
            let bound = &scale * from_natural(&counts[k - 1]);
            ReportRow::new(
                "massk",
                if verdicts[k - 1] {
                    Status::Pass
                } else {
                    Status::Fail
                },
            )
            .param("weights", w)
            .param("k", k)
            .lhs(Quantity::natural(&masses[k - 1]))
            .rhs(Quantity::rational(&bound))
        })
        .collect())
}

fn massk_single(w: &WeightVector, k: Option<usize>) -> Result<Report> {
    Ok(massk_rows(w, k)?.into_iter().collect())
}

fn massk_grid(t_max: usize, w_max: u64) -> Result<Report> {
    if t_max < 3 || w_max == 0 {
        return Err(guard("massk grid needs t_max >= 3 and w_max >= 1"));
    }
    let mut violations = 0usize;
    let mut checked = 0usize;
    let mut report = Report::new();
    for t in 3..=t_max {
        let combos = (w_max as usize).pow(t as u32);
        for idx in 0..combos {
            let mut rest = idx;
            let ws: Vec<u64> = (0..t)
                .map(|_| {
                    let d = rest % w_max as usize;
                    rest /= w_max as usize;
                    d as u64 + 1
                })
                .collect();
            let w = WeightVector::new(ws)?;
            for row in massk_rows(&w, None)? {
                checked += 1;
                if row.status == Status::Fail {
                    violations += 1;
                    report.push(row);
                }
            }
        }
    }
    report.push(
        ReportRow::new(
            "massk_grid",
            if violations == 0 {
                Status::Pass
            } else {
                Status::Fail
            },
        )
        .param("t_max", t_max)
        .param("w_max", w_max)
        .param("checked", checked)
        .lhs(Quantity::text(violations.to_string()))
        .note("lhs counts violations"),
    );
    Ok(report)
}

fn kappa(w: &WeightVector) -> Result<Report> {
    let dist = kappa_distribution(w)?;
    let check = verify_kappa_ratio(w)?;
    let mut report: Report = dist
        .iter()
        .enumerate()
        .map(|(i, p)| {
            ReportRow::new("kappa", Status::Pass)
                .param("weights", w)
                .param("k", i + 1)
                .lhs(Quantity::rational(p))
        })
        .collect();
    let t_over_n = ratio(w.t() as i64, w.total() as i64);
    let ratio_row = ReportRow::new(
        "kappa_ratio",
        if check.ratio_holds {
            Status::Pass
        } else {
            Status::Fail
        },
    )
    .param("weights", w)
    .rhs(Quantity::rational(&t_over_n))
    .note(match check.first_violation {
        Some(i) => format!("first violation at k = {i}"),
        None => "Pr(k+1) <= (t/n) Pr(k) / k for every k".to_string(),
    });
    report.push(ratio_row);
    report.push(
        ReportRow::new(
            "kappa_exp",
            match check.exp_bound {
                ExpOrdering::Greater => Status::Pass,
                ExpOrdering::Less => Status::Fail,
                ExpOrdering::Undecidable => Status::Flag,
            },
        )
        .param("weights", w)
        .lhs(Quantity::rational(&dist[0]))
        .rhs(Quantity::exp(&-t_over_n)),
    );
    Ok(report)
}

fn bound_quantity(v: &BoundValue) -> Quantity {
    match v {
        BoundValue::Rational(p) => Quantity::rational(p),
        BoundValue::Exp(x) => Quantity::exp(x),
    }
}

fn rhs(common: &Common, n: usize, alpha: &str) -> Result<Report> {
    if n == 0 {
        return Err(guard("n must be at least 1"));
    }
    let alpha_q = parse_rational(alpha)?;
    let table = count_table(common, n)?;
    let gen1 = rhs_gen1(&table, n)?;
    let (t, value) = rhs_theorem(&table, n, &alpha_q)?;
    let mut report = Report::new();
    report.push(
        ReportRow::new("rhs_gen1", Status::Pass)
            .param("n", n)
            .param("t_star", gen1.t_star)
            .lhs(bound_quantity(&gen1.value))
            .note("min over t of max(e^(-t/n), Pr(F_t connected))"),
    );
    report.push(
        ReportRow::new("rhs_theorem", Status::Pass)
            .param("n", n)
            .param("alpha", &alpha_q)
            .param("t_star", t)
            .lhs(Quantity::rational(&value))
            .note("min over alpha n < t <= n of Pr(F_t connected)"),
    );
    Ok(report)
}

fn deduction(common: &Common, n: Option<usize>, n_max: usize) -> Result<Report> {
    let range: Vec<usize> = match n {
        Some(n) => vec![n],
        None => (1..=n_max).collect(),
    };
    let top = range.iter().copied().max().unwrap_or(0);
    if top == 0 {
        return Err(guard("n must be at least 1"));
    }
    let table = count_table(common, top)?;
    let third = ratio(1, 3);
    let mut report = Report::new();
    for n in range {
        let holds = verify_deduction(&table, n)?;
        let gen1 = rhs_gen1(&table, n)?;
        let (_, theorem) = rhs_theorem(&table, n, &third)?;
        let status = if holds {
            Status::Pass
        } else if gen1.value.try_cmp(&BoundValue::Rational(theorem.clone())) == Some(Ordering::Less)
        {
            Status::Fail
        } else {
            Status::Flag
        };
        report.push(
            ReportRow::new("deduction", status)
                .param("n", n)
                .lhs(bound_quantity(&gen1.value))
                .rhs(Quantity::rational(&theorem)),
        );
    }
    Ok(report)
}

fn classes(n: usize) -> Result<Report> {
    Ok(equiv_classes(n)?
        .into_iter()
        .map(|c| {
            ReportRow::new("class", Status::Pass)
                .param("n", n)
                .param("core", c.core.to_literal())
                .param("weights", &c.weight_vector)
                .lhs(Quantity::text(c.member_count.to_string()))
                .rhs(Quantity::text(c.connected_count.to_string()))
                .note("lhs members, rhs connected members")
        })
        .collect())
}

fn theorem(
    common: &Common,
    class: ClassKind,
    n: usize,
    graphs: Option<&Path>,
    seeds: usize,
) -> Result<Report> {
    if n == 0 || n > MAX_VERIFY_N {
        return Err(guard(format!(
            "theorem enumerates classes only for 1 <= n <= {MAX_VERIFY_N}, got {n}"
        )));
    }
    let class = match class {
        ClassKind::Forests => GraphClass::forests(n)?,
        ClassKind::All => GraphClass::all(n)?,
        ClassKind::Closure => alterable_closure(&seed_class(common, n, graphs, seeds)?, n),
    };
    Ok(verify_theorem(&class, n)?)
}

fn closure(common: &Common, n: usize, graphs: Option<&Path>, seeds: usize) -> Result<Report> {
    let seed = seed_class(common, n, graphs, seeds)?;
    let closed = alterable_closure(&seed, n);
    let mut report: Report = closed
        .members(n)
        .map(|g| {
            ReportRow::new("closure_member", Status::Pass)
                .param("n", n)
                .param("graph", g.to_literal())
        })
        .collect();
    let mut summary = ReportRow::new("closure", Status::Pass)
        .param("n", n)
        .param("seeds", seed.len(n))
        .param("members", closed.len(n));
    if let Some(frac) = connected_fraction(&closed, n) {
        summary = summary
            .lhs(Quantity::rational(&frac))
            .note("lhs connected fraction");
    }
    report.push(summary);
    Ok(report)
}

fn sample(
    common: &Common,
    kind: SampleKind,
    n: Option<usize>,
    w: Option<&str>,
    count: usize,
) -> Result<Vec<String>> {
    let mut rng = RngHandle::new(common.seed);
    match kind {
        SampleKind::Uniform => {
            let n = n.ok_or_else(|| guard("--kind uniform needs --n"))?;
            if n == 0 {
                return Err(guard("n must be at least 1"));
            }
            let sampler = UniformForestSampler::new(n);
            Ok((0..count)
                .map(|_| sampler.sample(&mut rng).to_literal())
                .collect())
        }
        SampleKind::WeightedTree => {
            let w = weights(w.ok_or_else(|| guard("--kind weighted-tree needs --weights"))?)?;
            (0..count)
                .map(|_| Ok(sample_weighted_tree(&w, &mut rng)?.to_literal()))
                .collect()
        }
        SampleKind::WeightedForest => {
            let w = weights(w.ok_or_else(|| guard("--kind weighted-forest needs --weights"))?)?;
            let sampler = WeightedForestSampler::new(&w)?;
            Ok((0..count)
                .map(|_| sampler.sample(&mut rng).to_literal())
                .collect())
        }
    }
}

fn estimate(common: &Common, n: usize, samples: u64) -> Result<Report> {
    let mut rng = RngHandle::new(common.seed);
    let est = estimate_conn_prob(n, samples, &mut rng)?;
    let table = count_table(common, n)?;
    let exact = table.conn_prob(n);
    let exact_f = to_f64(&exact);
    let status = if est.brackets(exact_f) {
        Status::Pass
    } else {
        Status::Flag
    };
    Ok(std::iter::once(
        ReportRow::new("estimate", status)
            .param("n", n)
            .param("samples", samples)
            .param("seed", common.seed)
            .param("connected", est.connected)
            .lhs(Quantity::rational(&ratio(
                est.connected as i64,
                est.samples as i64,
            )))
            .rhs(Quantity::rational(&exact))
            .note(format!("99% half-width {:.6}", est.half_width)),
    )
    .collect())
}

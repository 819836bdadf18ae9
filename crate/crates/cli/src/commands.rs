use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};

use grothperm::bpd::{clt_samples, enumerate_bpd, two_asm_law, BumplessPipeDream, BPD_CAP, DOUBLE_CROSSING_EXAMPLE};
use grothperm::exact::{asm_count, beta_bounds, upsilon_layered, upsilon_w0, LayeredTable};
use grothperm::io::{write_csv, Pgm};
use grothperm::nonreduced::{exit_law, inversion_scaling_experiment, kappa};
use grothperm::permuton::{fluct_report, limit_height, standardized_heights, EmpiricalGrid};
use grothperm::pipedream::{exact_distribution, sample_permutation, sample_traced, upsilon_bruteforce, upsilon_table, PipeDream};
use grothperm::rng::stream;
use grothperm::stats::{ks_vs_cdf, mean_sd, normal_cdf};
use grothperm::tasep::{run_with_exit_boundary, trajectory};
use grothperm::vertex::{sample_colored, sample_colored_traced};
use grothperm::{mc, Composition, Permutation};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::checks;
use crate::{
    sink, BpdArgs, CliError, Command, Common, ExactArgs, FluctArgs, HeatmapArgs, ImageFormat, LimitShapeArgs, NonreducedArgs,
    OptimizeArgs, Result, SampleArgs, Sampler, TasepArgs, TasepRecord, ValidateArgs,
};

pub(crate) fn dispatch(common: &Common, command: Command) -> Result<()> {
    match command {
        Command::Sample(a) => sample(common, a),
        Command::Heatmap(a) => heatmap(common, a),
        Command::LimitShape(a) => limit_shape(common, a),
        Command::Tasep(a) => tasep(common, a),
        Command::Fluct(a) => fluct(common, a),
        Command::Nonreduced(a) => nonreduced(common, a),
        Command::Exact(a) => exact(common, a),
        Command::OptimizeLayered(a) => optimize(common, a),
        Command::Bpd(a) => bpd(common, a),
        Command::Validate(a) => validate(common, a),
    }
}

fn need(cond: bool, msg: impl Into<String>) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(CliError::Usage(msg.into()))
    }
}

fn one_line(w: &Permutation) -> String {
    w.images().iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn sample(common: &Common, a: SampleArgs) -> Result<()> {
    need(a.n >= 1, "--n must be at least 1")?;
    need(a.q.is_none() || a.sampler == Sampler::PipeDream, "--q needs --sampler pipe-dream")?;
    need(a.trace.is_none() || a.sampler == Sampler::Vertex, "--trace needs --sampler vertex")?;
    let (n, p) = (a.n, a.p);
    let ws = mc::run(common.seed, a.samples, |_, rng| match (a.sampler, a.q) {
        (Sampler::PipeDream, None) => sample_permutation(n, p, rng),
        (Sampler::PipeDream, Some(q)) => PipeDream::sample(n, p, rng)?.q_reduce(q, rng),
        (Sampler::Vertex, _) => sample_colored(n, p, rng),
        (Sampler::Nonreduced, _) => sample_traced(n, p, rng),
    })?;
    let rows = ws.iter().enumerate().map(|(i, w)| vec![i.to_string(), w.inversions().to_string(), one_line(w)]);
    write_csv(sink(&common.out)?, &["sample", "inversions", "w"], rows)?;
    if let Some(prefix) = a.trace {
        let (_, dream, records) = sample_colored_traced(n, p, &mut stream(common.seed, 0))?;
        let base = prefix.to_string_lossy().into_owned();
        let mut f = BufWriter::new(File::create(format!("{base}.dream"))?);
        write!(f, "{dream}")?;
        f.flush()?;
        let rows = records.iter().map(|v| {
            [v.i, v.j, v.bottom as usize, v.left as usize, v.top as usize, v.right as usize].map(|x| x.to_string())
        });
        let mut f = BufWriter::new(File::create(format!("{base}.colors.csv"))?);
        write_csv(&mut f, &["i", "j", "bottom", "left", "top", "right"], rows)?;
        f.flush()?;
    }
    Ok(())
}

fn heatmap(common: &Common, a: HeatmapArgs) -> Result<()> {
    need(a.n >= 1 && a.grid >= 1 && a.grid <= a.n, "need 1 <= --grid <= --n")?;
    need(a.samples >= 1, "--samples must be positive")?;
    let (n, p, g) = (a.n, a.p, a.grid);
    let grid = mc::fold(
        common.seed,
        a.samples,
        || EmpiricalGrid::new(g, n),
        |acc, _, rng| acc.add(&sample_permutation(n, p, rng)?),
        |acc, part| acc.merge(part).expect("grids share a shape"),
    )?;
    let mut out = sink(&common.out)?;
    match a.format {
        ImageFormat::Pgm => {
            let gray = grid.grayscale();
            let pixels: Vec<u8> = (0..g).rev().flat_map(|r| gray[r * g..(r + 1) * g].iter().copied()).collect();
            let max = grid.counts.iter().copied().max().unwrap_or(0);
            Pgm::new(g, g, pixels)?
                .with_comment(format!("grothperm heatmap n={n} p={p} samples={} seed={}", a.samples, common.seed))
                .with_comment(format!("gray = round(255 * cell / max cell), max cell = {max} points"))
                .with_comment("columns bin positions j left to right, rows bin values w(j) top = largest")
                .write(&mut out)?;
        }
        ImageFormat::Csv => {
            let total = (a.samples * n as u64) as f64;
            let rows = (0..g).flat_map(|r| (0..g).map(move |c| (r, c))).map(|(r, c)| {
                let k = grid.cell(r, c);
                vec![r.to_string(), c.to_string(), k.to_string(), format!("{:.8}", k as f64 / total)]
            });
            write_csv(&mut out, &["row", "col", "count", "mass"], rows)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn limit_shape(common: &Common, a: LimitShapeArgs) -> Result<()> {
    need(a.grid >= 1, "--grid must be positive")?;
    let g = a.grid;
    let mut rows = Vec::with_capacity((g + 1) * (g + 1));
    for i in 0..=g {
        for j in 0..=g {
            let (x, y) = (i as f64 / g as f64, j as f64 / g as f64);
            rows.push(vec![format!("{x:.6}"), format!("{y:.6}"), format!("{:.8}", limit_height(x, y, a.p)?)]);
        }
    }
    write_csv(sink(&common.out)?, &["x", "y", "h"], rows)?;
    Ok(())
}

fn tasep(common: &Common, a: TasepArgs) -> Result<()> {
    let out = sink(&common.out)?;
    match a.record {
        TasepRecord::Trajectory => {
            let (path, _) = trajectory(a.k, a.n, a.p, &mut stream(common.seed, 0))?;
            let mut header = vec!["t".to_string()];
            header.extend((1..=a.k).map(|i| format!("xi_{i}")));
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            let rows = path.iter().enumerate().map(|(t, xs)| {
                let mut r = vec![t.to_string()];
                r.extend(xs.iter().map(|x| x.to_string()));
                r
            });
            write_csv(out, &header, rows)?;
        }
        TasepRecord::Exits => {
            let recs = mc::run(common.seed, a.samples, |_, rng| run_with_exit_boundary(a.k, a.n, a.p, rng))?;
            let rows = recs.iter().enumerate().flat_map(|(s, r)| {
                r.exit_times.iter().enumerate().map(move |(i, t)| vec![s.to_string(), (i + 1).to_string(), t.to_string()])
            });
            write_csv(out, &["sample", "i", "t_exit"], rows)?;
        }
    }
    Ok(())
}

fn fluct(common: &Common, a: FluctArgs) -> Result<()> {
    need(a.samples >= 2, "--samples must be at least 2")?;
    let xs = standardized_heights(a.n, a.x, a.y, a.p, a.samples, common.seed)?;
    let rows = xs.iter().enumerate().map(|(i, x)| vec![i.to_string(), format!("{x:.6}")]);
    write_csv(sink(&common.out)?, &["sample", "standardized"], rows)?;
    let r = fluct_report(&xs)?;
    eprintln!(
        "mean {:.4} (TW {:.4}), sd {:.4} (TW {:.4}), KS {:.4}",
        r.mean, r.tw_mean, r.sd, r.tw_sd, r.ks
    );
    Ok(())
}

fn nonreduced(common: &Common, a: NonreducedArgs) -> Result<()> {
    let out = sink(&common.out)?;
    if let Some(i) = a.law {
        need(a.n.len() == 1, "--law takes a single --n")?;
        let law = exit_law(a.n[0], i, a.p)?;
        let rows = law.iter().enumerate().map(|(j, pr)| vec![(j + 1).to_string(), format!("{pr:.12e}")]);
        write_csv(out, &["j", "probability"], rows)?;
        return Ok(());
    }
    need(a.p < 1.0, "--p must be below 1")?;
    let predicted = kappa() * (a.p / (1.0 - a.p)).sqrt();
    let mut rows = Vec::new();
    for &n in &a.n {
        let r = inversion_scaling_experiment(n, a.p, a.samples, common.seed)?;
        rows.push(vec![
            n.to_string(),
            a.p.to_string(),
            a.samples.to_string(),
            format!("{:.6}", r.inv_mean),
            format!("{:.6}", r.inv_se),
            format!("{:.6}", r.dis_mean),
            format!("{:.6}", r.dis_se),
            format!("{:.6}", r.diagonal_fraction),
            format!("{predicted:.6}"),
        ]);
    }
    let header = ["n", "p", "samples", "inv_ratio", "inv_se", "dis_ratio", "dis_se", "diagonal_fraction", "kappa"];
    write_csv(out, &header, rows)?;
    Ok(())
}

fn exact(common: &Common, a: ExactArgs) -> Result<()> {
    let mut out = sink(&common.out)?;
    let t = a.target;
    let beta = &a.beta;
    let value: BigRational = if let Some(kn) = t.w0 {
        upsilon_w0(kn[0], kn[1], beta)
    } else if let Some(b) = t.layered {
        upsilon_layered(&b.parse::<Composition>()?, beta)
    } else if let Some(w) = t.perm {
        upsilon_bruteforce(&w.parse::<Permutation>()?, beta)?
    } else if let Some(n) = t.table {
        let rows = upsilon_table(n, beta)?.into_iter().map(|(w, u)| vec![one_line(&w), u.to_string()]);
        write_csv(out, &["w", "upsilon"], rows)?;
        return Ok(());
    } else {
        return Err(CliError::Usage("choose one of --w0, --layered, --perm, --table".into()));
    };
    writeln!(out, "{value}")?;
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct Bound {
    beta: f64,
    lower: f64,
    upper: f64,
}

fn optimize(common: &Common, a: OptimizeArgs) -> Result<()> {
    let mut out = sink(&common.out)?;
    if a.bounds {
        let bounds = (1..=40)
            .map(|i| {
                let beta = i as f64 / 8.0;
                beta_bounds(beta).map(|(lower, upper)| Bound { beta, lower, upper })
            })
            .collect::<grothperm::Result<Vec<_>>>()?;
        serde_json::to_writer_pretty(&mut out, &bounds).map_err(|e| CliError::Io(e.into()))?;
        writeln!(out)?;
        out.flush()?;
        return Ok(());
    }
    let n = a.n.ok_or_else(|| CliError::Usage("--n is required".into()))?;
    need(n >= 1, "--n must be at least 1")?;
    let opt = LayeredTable::new(n)?.optimize_all();
    let chosen = if a.all { &opt[..] } else { &opt[n - 1..] };
    writeln!(out, "n,composition,f")?;
    for o in chosen {
        writeln!(out, "{}", o.csv_row())?;
    }
    out.flush()?;
    Ok(())
}

fn bpd(common: &Common, a: BpdArgs) -> Result<()> {
    let mut out = sink(&common.out)?;
    if a.example {
        let d: BumplessPipeDream = DOUBLE_CROSSING_EXAMPLE.parse()?;
        let c = d.crossing_counts();
        let n = d.n();
        let doubled: Vec<String> = (1..=n)
            .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
            .filter(|&(i, j)| c[i][j] >= 2)
            .map(|(i, j)| format!("({i},{j}) x{}", c[i][j]))
            .collect();
        write!(out, "{d}")?;
        writeln!(out, "w = {}", d.permutation())?;
        writeln!(out, "pairs crossing more than once: {}", doubled.join(" "))?;
        out.flush()?;
        return Ok(());
    }
    let n = a.n.ok_or_else(|| CliError::Usage("--n is required".into()))?;
    if a.clt {
        let xs = clt_samples(n, a.samples, common.seed)?;
        let rows = xs.iter().enumerate().map(|(i, z)| vec![i.to_string(), format!("{z:.6}")]);
        write_csv(out, &["sample", "z"], rows)?;
        let (m, sd) = mean_sd(&xs)?;
        eprintln!("mean {m:.4}, sd {sd:.4}, KS vs normal {:.4}", ks_vs_cdf(&xs, normal_cdf)?.statistic);
        return Ok(());
    }
    need(n >= 1 && n <= BPD_CAP, format!("--n must be in 1..={BPD_CAP} for enumeration"))?;
    let mut counts: BTreeMap<Permutation, u64> = BTreeMap::new();
    let all = enumerate_bpd(n)?;
    for d in &all {
        *counts.entry(d.permutation()).or_default() += 1;
    }
    let asm = two_asm_law(n)?;
    let pipe = exact_distribution(n, &BigRational::new(1.into(), 2.into()))?;
    let rows = pipe.iter().map(|(w, pr)| {
        vec![
            one_line(w),
            counts.get(w).copied().unwrap_or(0).to_string(),
            asm.get(w).map(|v| v.to_string()).unwrap_or_else(|| "0".into()),
            pr.to_string(),
        ]
    });
    write_csv(&mut out, &["w", "bpd_count", "two_asm_probability", "pipe_dream_probability"], rows)?;
    out.flush()?;
    if BigInt::from(all.len()) != asm_count(n) {
        return Err(CliError::Validation(format!("{} dreams, expected {}", all.len(), asm_count(n))));
    }
    if asm != pipe {
        return Err(CliError::Validation("2-ASM law differs from the p = 1/2 pipe-dream law".into()));
    }
    Ok(())
}

fn validate(common: &Common, a: ValidateArgs) -> Result<()> {
    let mut out = sink(&common.out)?;
    let results = checks::suite(a.full);
    for c in &results {
        writeln!(out, "{}", c.line())?;
    }
    out.flush()?;
    let failed: Vec<&str> = results.iter().filter(|c| !c.pass).map(|c| c.name).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Validation(failed.join(", ")))
    }
}

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use spinring::asymptotics::{validity_warnings, GaussianProfileParams};
use spinring::entanglement::TwoQubitDensity;
use spinring::profile::{default_distances, exact_profile, truncated_profile};
use spinring::{
    concurrence_general, concurrence_xstate, gaussian_profile, gaussian_rdm,
    solve_thermal_with_cap, truncated_rdm, truncation_weight, two_site_rdm_exact,
    two_site_rdm_full, ChainParams, ConcurrenceProfile, Method, TruncationReport, TwoSiteDensity,
};

use crate::args::{
    Cli, Command, CompareArgs, Figure1Args, Format, MethodChoice, ProfileArgs, RdmArgs,
};
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::{num, profiles_csv, to_json, Diagnostics, ProfileDocument};

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Profile(args) => profile(args),
        Command::Rdm(args) => rdm(args),
        Command::Compare(args) => compare(args),
        Command::Figure1(args) => figure1(args),
    }
}

fn emit(output: Option<&Path>, text: &str) -> CliResult<()> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn diagnostics(params: &ChainParams, log_warnings: bool) -> Diagnostics {
    let warnings = validity_warnings(params);
    if log_warnings {
        for w in &warnings {
            log::warn!("{w}");
        }
    }
    Diagnostics::new(truncation_weight(params), warnings)
}

fn compute_profile(
    params: &ChainParams,
    method: Method,
    distances: &[usize],
    max_exact_n: usize,
) -> CliResult<ConcurrenceProfile> {
    Ok(match method {
        Method::Exact => exact_profile(&solve_thermal_with_cap(params, max_exact_n)?, distances)?,
        Method::Truncated => truncated_profile(params, distances)?,
        Method::Gaussian => gaussian_profile(params, distances)?,
    })
}

fn profile(args: ProfileArgs) -> CliResult<()> {
    let cfg = RunConfig::resolve(&args.common)?;
    let params = cfg.params()?;
    let methods = args
        .method
        .or(cfg.method)
        .unwrap_or(MethodChoice::Truncated)
        .methods();
    let distances = default_distances(params.n_sites());
    let profiles = methods
        .iter()
        .map(|&m| compute_profile(&params, m, &distances, cfg.max_exact_n()))
        .collect::<CliResult<Vec<_>>>()?;
    let diag = diagnostics(&params, methods.iter().any(|&m| m != Method::Exact));

    let text = match cfg.format().unwrap_or(Format::Csv) {
        Format::Csv => profiles_csv(&profiles),
        Format::Json => {
            let docs: Vec<_> = profiles
                .iter()
                .map(|p| ProfileDocument::new(p, diag.clone()))
                .collect();
            match docs.as_slice() {
                [single] => to_json(single),
                _ => to_json(&docs),
            }
        }
    };
    emit(cfg.output.as_deref(), &text)
}

#[derive(Debug, Serialize, Deserialize)]
struct RdmDocument {
    params: ChainParams,
    method: Method,
    sites: [usize; 2],
    /// Rows of `[re, im]` pairs in the basis `|00⟩, |01⟩, |10⟩, |11⟩`.
    matrix: Vec<Vec<[f64; 2]>>,
    eigenvalues: [f64; 4],
    x_form: TwoSiteDensity,
    concurrence_general: f64,
    concurrence_xstate: f64,
}

fn rdm(args: RdmArgs) -> CliResult<()> {
    let cfg = RunConfig::resolve(&args.common)?;
    let params = cfg.params()?;
    let [m, n] = match args.sites.as_deref().map(<[usize; 2]>::try_from) {
        Some(Ok(pair)) => pair,
        Some(Err(_)) => return Err(CliError::Usage("--sites takes exactly two values".into())),
        None => cfg
            .sites
            .ok_or_else(|| CliError::Usage("missing required parameter --sites M N".into()))?,
    };
    params.check_site(m)?;
    params.check_site(n)?;
    if m == n {
        return Err(spinring::Error::InvalidPair(m).into());
    }
    let method = match args.method.or(cfg.method).unwrap_or(MethodChoice::Exact) {
        MethodChoice::Exact => Method::Exact,
        MethodChoice::Truncated => Method::Truncated,
        MethodChoice::Gaussian => Method::Gaussian,
        MethodChoice::All => {
            return Err(CliError::Usage("rdm takes a single --method".into()));
        }
    };
    let distance = (n + params.n_sites() - m) % params.n_sites();
    let (full, x_form) = match method {
        Method::Exact => {
            let state = solve_thermal_with_cap(&params, cfg.max_exact_n())?;
            (
                two_site_rdm_full(&state, m, n)?,
                two_site_rdm_exact(&state, m, n)?,
            )
        }
        Method::Truncated | Method::Gaussian => {
            diagnostics(&params, true);
            let x = if method == Method::Truncated {
                truncated_rdm(&params, distance)?
            } else {
                gaussian_rdm(&params, distance)?
            };
            (TwoQubitDensity::from(&x), x)
        }
    };
    let doc = RdmDocument {
        params,
        method,
        sites: [m, n],
        matrix: (0..4)
            .map(|r| {
                (0..4)
                    .map(|c| {
                        let z = full.matrix()[(r, c)];
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect(),
        eigenvalues: full.eigenvalues(),
        x_form,
        concurrence_general: concurrence_general(&full)?,
        concurrence_xstate: concurrence_xstate(&x_form),
    };

    let text = match cfg.format() {
        Some(Format::Json) => to_json(&doc),
        Some(Format::Csv) => {
            let mut s = String::from("row,col,re,im\n");
            for (r, row) in doc.matrix.iter().enumerate() {
                for (c, [re, im]) in row.iter().enumerate() {
                    s.push_str(&format!("{r},{c},{},{}\n", num(*re), num(*im)));
                }
            }
            s
        }
        None => rdm_text(&doc),
    };
    emit(cfg.output.as_deref(), &text)
}

fn rdm_text(doc: &RdmDocument) -> String {
    let p = &doc.params;
    let mut s = format!(
        "method {} sites ({}, {}) n_sites {} beta_j {} beta_mub {}\n",
        doc.method,
        doc.sites[0],
        doc.sites[1],
        p.n_sites(),
        num(p.beta_j()),
        num(p.beta_mub())
    );
    s.push_str("real part, basis |00>,|01>,|10>,|11> (0 = up)\n");
    for row in &doc.matrix {
        let cells: Vec<String> = row
            .iter()
            .map(|[re, _]| format!("{:>19}", num(*re)))
            .collect();
        s.push_str(&cells.join(" "));
        s.push('\n');
    }
    s.push_str("imaginary part\n");
    for row in &doc.matrix {
        let cells: Vec<String> = row
            .iter()
            .map(|[_, im]| format!("{:>19}", num(*im)))
            .collect();
        s.push_str(&cells.join(" "));
        s.push('\n');
    }
    let ev: Vec<String> = doc.eigenvalues.iter().map(|&e| num(e)).collect();
    s.push_str(&format!("eigenvalues {}\n", ev.join(" ")));
    s.push_str(&format!(
        "concurrence_general {}\n",
        num(doc.concurrence_general)
    ));
    s.push_str(&format!(
        "concurrence_xstate {}\n",
        num(doc.concurrence_xstate)
    ));
    s
}

#[derive(Debug, Serialize, Deserialize)]
struct CompareRow {
    d: usize,
    c_exact: f64,
    c_truncated: f64,
    c_gaussian: f64,
    abs_err_truncated: f64,
    rel_err_truncated: Option<f64>,
    abs_err_gaussian: f64,
    rel_err_gaussian: Option<f64>,
    /// Largest componentwise deviation of the pair density from the exact one.
    rdm_err_truncated: f64,
    rdm_err_gaussian: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct CompareDocument {
    params: ChainParams,
    rows: Vec<CompareRow>,
    truncation: TruncationReport,
    warnings: Vec<String>,
}

fn compare(args: CompareArgs) -> CliResult<()> {
    let cfg = RunConfig::resolve(&args.common)?;
    let params = cfg.params()?;
    params.require_field()?;
    let state = solve_thermal_with_cap(&params, cfg.max_exact_n())?;
    let diag = diagnostics(&params, true);

    let rel = |err: f64, exact: f64| (exact > 0.0).then(|| err / exact);
    let rows = default_distances(params.n_sites())
        .into_iter()
        .map(|d| {
            let exact = two_site_rdm_exact(&state, 0, d)?;
            let trunc = truncated_rdm(&params, d)?;
            let gauss = gaussian_rdm(&params, d)?;
            let (ce, ct, cg) = (
                concurrence_xstate(&exact),
                concurrence_xstate(&trunc),
                concurrence_xstate(&gauss),
            );
            Ok(CompareRow {
                d,
                c_exact: ce,
                c_truncated: ct,
                c_gaussian: cg,
                abs_err_truncated: (ct - ce).abs(),
                rel_err_truncated: rel((ct - ce).abs(), ce),
                abs_err_gaussian: (cg - ce).abs(),
                rel_err_gaussian: rel((cg - ce).abs(), ce),
                rdm_err_truncated: exact.max_abs_diff(&trunc),
                rdm_err_gaussian: exact.max_abs_diff(&gauss),
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    let doc = CompareDocument {
        params,
        rows,
        truncation: truncation_weight(&params),
        warnings: diag.warnings,
    };

    let text = match cfg.format() {
        Some(Format::Json) => to_json(&doc),
        Some(Format::Csv) => compare_table(&doc, ","),
        None => {
            let mut s = compare_table(&doc, " ");
            s.push_str(&format!(
                "retained_weight {} leading_neglected_weight {}\n",
                num(doc.truncation.retained_weight),
                num(doc.truncation.leading_neglected_weight)
            ));
            s
        }
    };
    emit(cfg.output.as_deref(), &text)
}

fn compare_table(doc: &CompareDocument, sep: &str) -> String {
    let header = [
        "distance",
        "c_exact",
        "c_truncated",
        "c_gaussian",
        "abs_err_truncated",
        "rel_err_truncated",
        "abs_err_gaussian",
        "rel_err_gaussian",
        "rdm_err_truncated",
        "rdm_err_gaussian",
    ];
    let opt = |x: Option<f64>| x.map_or_else(|| "nan".to_string(), num);
    let mut s = header.join(sep);
    s.push('\n');
    for r in &doc.rows {
        let cells = [
            r.d.to_string(),
            num(r.c_exact),
            num(r.c_truncated),
            num(r.c_gaussian),
            num(r.abs_err_truncated),
            opt(r.rel_err_truncated),
            num(r.abs_err_gaussian),
            opt(r.rel_err_gaussian),
            num(r.rdm_err_truncated),
            num(r.rdm_err_gaussian),
        ];
        s.push_str(&cells.join(sep));
        s.push('\n');
    }
    s
}

/// `(file stem, βJ, βμB, caption)` of the two reference curves.
const FIGURE1_CURVES: [(&str, f64, f64, &str); 2] = [
    ("figure1_solid", 0.6, 3.0, "muB/kT = 3, J/kT = 0.6"),
    ("figure1_dashed", 0.8, 4.0, "muB/kT = 4, J/kT = 0.8"),
];

const FIGURE1_SITES: usize = 20;

fn figure1(args: Figure1Args) -> CliResult<()> {
    if args.emit_plot && args.format != Format::Csv {
        return Err(CliError::Usage("--emit-plot needs --format csv".into()));
    }
    fs::create_dir_all(&args.output).map_err(|e| CliError::io(&args.output, e))?;
    let ext = match args.format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let distances: Vec<usize> = (0..=FIGURE1_SITES / 2).collect();
    let mut files = Vec::new();
    for (stem, bj, bmu, caption) in FIGURE1_CURVES {
        let params = ChainParams::new(FIGURE1_SITES, bj, bmu)?;
        let profile = gaussian_profile(&params, &distances)?;
        let text = match args.format {
            Format::Csv => profiles_csv(std::slice::from_ref(&profile)),
            Format::Json => to_json(&ProfileDocument::new(&profile, diagnostics(&params, true))),
        };
        let path = args.output.join(format!("{stem}.{ext}"));
        emit(Some(&path), &text)?;
        let g = GaussianProfileParams::new(&params)?;
        println!(
            "{} amplitude {} length {} ({caption})",
            path.display(),
            num(g.amplitude),
            num(g.length)
        );
        files.push((format!("{stem}.{ext}"), caption));
    }
    if args.emit_plot {
        let path = args.output.join("figure1.gp");
        emit(Some(&path), &plot_script(&files))?;
        println!("{}", path.display());
    }
    Ok(())
}

fn plot_script(files: &[(String, &str)]) -> String {
    let styles = ["dt 1", "dt 2"];
    let curves: Vec<String> = files
        .iter()
        .zip(styles)
        .map(|((file, caption), style)| {
            format!("'{file}' every ::1 using 1:2 with lines lt 1 {style} title '{caption}'")
        })
        .collect();
    format!(
        "# gnuplot script: concurrence profiles of the N = 20 ring\n\
         set datafile separator ','\n\
         set xlabel 'distance |m - n|'\n\
         set ylabel 'concurrence C'\n\
         set xrange [0:10]\n\
         plot {}\n",
        curves.join(", \\\n     ")
    )
}

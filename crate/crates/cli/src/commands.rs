//! Implementations behind the subcommands. Every output file embeds the
//! effective configuration as `#` comment lines, and identical inputs and
//! flags always produce byte-identical outputs.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use firank::dataset::{validate_dataset_named, Dataset, RngSeed};
use firank::error::FirError;
use firank::eval::{
    build_report, effectiveness, exhaustive_search, stratified_folds, write_search_result,
    SearchConfig,
};
use firank::imaging::{extract_all, io as img_io, FeatureVector, LesionImage};
use firank::rankers::{self, Method, MethodParams};
use firank::synth::{self, SynthConfig};
use firank::Result;

pub fn extract(
    images: &Path,
    masks: &Path,
    labels_path: &Path,
    out: &Path,
    spacing: Option<f64>,
) -> Result<()> {
    let labels = read_label_sidecar(labels_path)?;
    let image_files = list_grid_files(images)?;
    if image_files.is_empty() {
        return Err(FirError::NoInput(format!(
            "no .pgm or .csv images under {}",
            images.display()
        )));
    }
    let mask_files = list_grid_files(masks)?;
    let mask_by_stem: BTreeMap<String, PathBuf> = mask_files
        .into_iter()
        .filter_map(|p| stem_of(&p).map(|s| (s, p)))
        .collect();

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut row_labels: Vec<f64> = Vec::new();
    let mut skipped: Vec<String> = Vec::new();
    for image_path in &image_files {
        let stem = match stem_of(image_path) {
            Some(s) => s,
            None => continue,
        };
        let mask_path = match mask_by_stem.get(&stem) {
            Some(p) => p,
            None => {
                skipped.push(format!("{stem}: no mask"));
                continue;
            }
        };
        let label = match labels.get(&stem) {
            Some(&l) => l,
            None => {
                skipped.push(format!("{stem}: no label"));
                continue;
            }
        };
        let pixels = img_io::load_grid(image_path)?;
        let mask = img_io::load_mask(mask_path)?;
        let lesion = LesionImage::new(pixels, mask, spacing)?;
        let features = extract_all(&lesion)?;
        rows.push(features.as_array().to_vec());
        row_labels.push(label);
    }
    if !skipped.is_empty() {
        println!("skipped {} unpaired file(s):", skipped.len());
        for s in &skipped {
            println!("  {s}");
        }
    }
    if rows.is_empty() {
        return Err(FirError::NoInput(
            "no image/mask/label triple could be paired".to_string(),
        ));
    }
    let names: Vec<String> = FeatureVector::NAMES.iter().map(|s| s.to_string()).collect();
    let ds = validate_dataset_named(&rows, &row_labels, names)?;
    let mut f = std::fs::File::create(out)?;
    writeln!(
        f,
        "# firank extract images={} masks={} labels={} spacing={} lesions={}",
        images.display(),
        masks.display(),
        labels_path.display(),
        spacing
            .map(|s| s.to_string())
            .unwrap_or_else(|| "none".to_string()),
        ds.sample_count()
    )?;
    ds.write_csv(&mut f)?;
    println!("wrote {} lesions to {}", ds.sample_count(), out.display());
    Ok(())
}

pub fn rank(data: &Path, methods: &str, out: &Path, params: &MethodParams) -> Result<()> {
    let ds = Dataset::read_csv_path(data)?;
    let methods = parse_methods(methods)?;
    let rankings: Vec<_> = methods
        .iter()
        .map(|&m| rankers::rank(&ds, m, params))
        .collect::<Result<_>>()?;
    let mut f = std::fs::File::create(out)?;
    let method_names: Vec<&str> = methods.iter().map(|m| m.name()).collect();
    let config = format!(
        "firank rank data={} methods={} relieff_k={} lap_k={} lap_t={} gini_bins={} graph_alpha={} lasso_grid_count={} lasso_grid_min_ratio={}",
        data.display(),
        method_names.join(","),
        params.relieff_k,
        params.lap_k,
        params.lap_t.map(|t| t.to_string()).unwrap_or_else(|| "auto".to_string()),
        params.gini_bins,
        params.graph_alpha,
        params.lasso_grid_count,
        params.lasso_grid_min_ratio,
    );
    rankers::write_rankings_csv(&mut f, &rankings, ds.feature_names(), &[config])?;
    println!(
        "ranked {} features with {} method(s) into {}",
        ds.feature_count(),
        rankings.len(),
        out.display()
    );
    Ok(())
}

pub fn search(
    data: &Path,
    kmax: usize,
    folds: usize,
    seed: u64,
    c: f64,
    threads: Option<usize>,
    out: &Path,
) -> Result<()> {
    if let Some(t) = threads {
        // ignore the error if a global pool already exists; the cap is
        // best-effort and never changes results
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global();
    }
    let ds = Dataset::read_csv_path(data)?;
    let split = stratified_folds(ds.labels(), folds, RngSeed(seed))?;
    let result = exhaustive_search(&ds, kmax, &split, c)?;
    let mut f = std::fs::File::create(out)?;
    write_search_result(
        &mut f,
        &result,
        &SearchConfig {
            seed,
            folds,
            c,
            kmax,
        },
    )?;
    println!(
        "evaluated {} subsets; best {:?} with mean AUC {:.4} (written to {})",
        result.evaluated_count,
        result.best_subset,
        result.best_mean_auc,
        out.display()
    );
    Ok(())
}

pub fn eff(ranking_path: &Path, optimal: &str, out: Option<&Path>) -> Result<()> {
    let rankings = read_rankings(ranking_path)?;
    let optimal = parse_indices(optimal)?;
    let mut lines = vec![
        format!(
            "# firank eff ranking={} optimal={}",
            ranking_path.display(),
            join(&optimal)
        ),
        "method,m,n_prefix,eff".to_string(),
    ];
    for r in &rankings {
        let e = effectiveness(r, &optimal)?;
        lines.push(format!(
            "{},{},{},{}",
            r.method,
            e.m,
            e.n_prefix,
            e.fraction()
        ));
    }
    write_lines(out, &lines)
}

pub fn synth(
    n: usize,
    d: usize,
    informative: &str,
    noise: f64,
    seed: u64,
    out: &Path,
) -> Result<()> {
    let informative = parse_indices(informative)?;
    let config = SynthConfig {
        n,
        d,
        informative: informative.clone(),
        noise,
        seed: RngSeed(seed),
    };
    let ds = synth::generate(&config)?;
    let mut f = std::fs::File::create(out)?;
    writeln!(
        f,
        "# firank synth n={n} d={d} informative={} noise={noise} seed={seed}",
        join(&informative)
    )?;
    ds.write_csv(&mut f)?;
    println!("wrote synthetic dataset to {}", out.display());
    Ok(())
}

pub fn report(ranking_path: &Path, optimal: &str, out: Option<&Path>) -> Result<()> {
    let rankings = read_rankings(ranking_path)?;
    let optimal = parse_indices(optimal)?;
    let table = build_report(&rankings, &optimal)?;
    match out {
        Some(prefix) => {
            let csv_path = prefix.with_extension("csv");
            let txt_path = prefix.with_extension("txt");
            let mut csv = std::fs::File::create(&csv_path)?;
            writeln!(
                csv,
                "# firank report ranking={} optimal={}",
                ranking_path.display(),
                join(&optimal)
            )?;
            table.write_csv(&mut csv)?;
            let mut txt = std::fs::File::create(&txt_path)?;
            table.write_text(&mut txt)?;
            println!("wrote {} and {}", csv_path.display(), txt_path.display());
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            swallow_broken_pipe(table.write_text(&mut stdout))?;
        }
    }
    Ok(())
}

/// A closed downstream pipe (e.g. `firank eff | head`) ends output early;
/// that is not an error.
fn swallow_broken_pipe(result: Result<()>) -> Result<()> {
    match result {
        Err(FirError::Io(msg)) if msg.contains("Broken pipe") => Ok(()),
        other => other,
    }
}

fn parse_methods(arg: &str) -> Result<Vec<Method>> {
    if arg.trim() == "all" {
        return Ok(Method::ALL.to_vec());
    }
    arg.split(',')
        .map(|name| Method::from_name(name.trim()))
        .collect()
}

fn parse_indices(arg: &str) -> Result<Vec<usize>> {
    let indices: std::result::Result<Vec<usize>, _> = arg
        .split(',')
        .map(|tok| tok.trim().parse::<usize>())
        .collect();
    indices.map_err(|e| FirError::ParseError {
        path: arg.to_string(),
        detail: format!("expected comma-separated indices: {e}"),
    })
}

fn read_rankings(path: &Path) -> Result<Vec<firank::dataset::Ranking>> {
    let f = std::fs::File::open(path).map_err(|e| FirError::ParseError {
        path: path.display().to_string(),
        detail: e.to_string(),
    })?;
    rankers::read_rankings_csv(f, &path.display().to_string())
}

/// Sidecar label file: `stem,label` per line, `#` comments allowed.
fn read_label_sidecar(path: &Path) -> Result<BTreeMap<String, f64>> {
    let text = std::fs::read_to_string(path).map_err(|e| FirError::ParseError {
        path: path.display().to_string(),
        detail: e.to_string(),
    })?;
    let mut map = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (stem, label) = trimmed
            .split_once(',')
            .ok_or_else(|| FirError::ParseError {
                path: path.display().to_string(),
                detail: format!("line {}: expected `stem,label`", lineno + 1),
            })?;
        let value: f64 = label.trim().parse().map_err(|e| FirError::ParseError {
            path: path.display().to_string(),
            detail: format!("line {}: {e}", lineno + 1),
        })?;
        map.insert(stem.trim().to_string(), value);
    }
    Ok(map)
}

fn list_grid_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| FirError::ParseError {
            path: dir.display().to_string(),
            detail: e.to_string(),
        })?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension()
                .and_then(|e| e.to_str())
                .map(|e| e.eq_ignore_ascii_case("pgm") || e.eq_ignore_ascii_case("csv"))
                .unwrap_or(false)
        })
        .collect();
    files.sort();
    Ok(files)
}

fn stem_of(path: &Path) -> Option<String> {
    path.file_stem()
        .and_then(|s| s.to_str())
        .map(|s| s.to_string())
}

fn join(indices: &[usize]) -> String {
    indices
        .iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn write_lines(out: Option<&Path>, lines: &[String]) -> Result<()> {
    match out {
        Some(path) => {
            let mut f = std::fs::File::create(path)?;
            for line in lines {
                writeln!(f, "{line}")?;
            }
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            let emitted = lines
                .iter()
                .try_for_each(|line| writeln!(stdout, "{line}").map_err(FirError::from));
            swallow_broken_pipe(emitted)?;
        }
    }
    Ok(())
}

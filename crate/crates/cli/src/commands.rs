use std::path::Path;

use pqtrain::ambiguity::{cross_ambiguity_dary, mimo_cross_ambiguity, snr_gain, AmbiguityMap};
use pqtrain::designs::{
    binomial_design, compose_dary, conventional_design, max_snr_design, parse_train, ptm_design,
    Design, MaxSnrOptions, PulseTrain,
};
use pqtrain::scene::{parse_scene_targets, render_scene, visibility_report, Scene};
use pqtrain::waveforms::{
    check_complementary, golay_pair, paraunitary, ParaunitaryMatrix, UnimodularSeq,
};
use pqtrain::DopplerGrid64;

use crate::failure::{usage, Failure, Outcome};
use crate::inputs;
use crate::{AmbiguityArgs, Command, DesignKind, GenKind, Output, SceneArgs, VerifyArgs};

/// Gains at or below this relative shortfall count as optimal.
const OPTIMALITY_TOLERANCE: f64 = 1e-6;

pub fn run(command: Command, out: &mut Output) -> Outcome {
    match command {
        Command::Gen { kind } => gen(kind, out),
        Command::Design { kind } => design(kind, out),
        Command::Verify(args) => verify(args, out),
        Command::Ambiguity(args) => ambiguity(args, out),
        Command::Scene(args) => scene(args, out),
        Command::Table1 { n, m } => table1(n, m, out),
    }
}

fn emit(out: &mut Output, path: Option<&Path>, bytes: Vec<u8>) -> Outcome {
    match path {
        Some(p) => inputs::write(p, &bytes),
        None => {
            out.stdout = Some(bytes);
            Ok(())
        }
    }
}

fn db(v: f64) -> String {
    format!("{v:.2}")
}

fn quoted(s: impl std::fmt::Display) -> String {
    format!("\"{}\"", s.to_string().replace('"', "'"))
}

fn gen(kind: GenKind, out: &mut Output) -> Outcome {
    match kind {
        GenKind::Golay { length, out: path } => {
            if length == 0 || !length.is_power_of_two() {
                return usage(format!("Golay length {length} is not a power of two"));
            }
            let pair = golay_pair(length)?;
            let residual = check_complementary(&[pair.x().clone(), pair.y().clone()])?;
            out.line(&[
                ("kind", "golay".into()),
                ("length", length.to_string()),
                ("residual", residual.to_string()),
            ]);
            emit(out, path.as_deref(), pair.to_csv().into_bytes())
        }
        GenKind::Paraunitary {
            order,
            chip_length,
            out: path,
        } => {
            if chip_length == 0 || !chip_length.is_power_of_two() {
                return usage(format!("chip length {chip_length} is not a power of two"));
            }
            let s = paraunitary(order, &golay_pair(chip_length)?)?;
            out.line(&[
                ("kind", "paraunitary".into()),
                ("size", s.size().to_string()),
                ("chip_length", s.chip_len().to_string()),
                ("residual", s.residual().to_string()),
            ]);
            emit(out, path.as_deref(), s.to_csv().into_bytes())
        }
    }
}

fn channel_orders(train: &PulseTrain<f64>, tol: f64) -> String {
    let orders: Vec<String> = train
        .channel_null_orders(tol)
        .into_iter()
        .map(|o| o.map_or_else(|| "none".to_string(), |v| v.to_string()))
        .collect();
    orders.join(",")
}

fn design_fields(kind: &str, d: &Design<f64>) -> Outcome<Vec<(&'static str, String)>> {
    let mut fields = vec![
        ("kind", kind.to_string()),
        ("d", d.alphabet().to_string()),
        ("n", d.len().to_string()),
        ("verified_order", d.verified_order().to_string()),
    ];
    if d.alphabet() > 2 {
        fields.push(("channel_orders", channel_orders(d.train(), 1e-10)));
    }
    fields.push(("null_order", d.declared_order().to_string()));
    fields.push(("snr_gain", format!("{:.2}", snr_gain(d.q())?)));
    Ok(fields)
}

fn design(kind: DesignKind, out: &mut Output) -> Outcome {
    let (name, d, path, extra) = match kind {
        DesignKind::Ptm { n, out } => ("ptm", ptm_design(n)?, out.out, vec![]),
        DesignKind::Binomial { n, out } => ("binomial", binomial_design(n)?, out.out, vec![]),
        DesignKind::Conventional { n, out } => {
            ("conventional", conventional_design(n)?, out.out, vec![])
        }
        DesignKind::Maxsnr {
            n,
            m,
            kkt_tolerance,
            max_iterations,
            out,
        } => {
            let mut opts = MaxSnrOptions::<f64>::default();
            if let Some(t) = kkt_tolerance {
                opts.kkt_tolerance = t;
            }
            if let Some(i) = max_iterations {
                opts.ipm.max_iterations = i;
            }
            let s = max_snr_design(n, m, &opts)?;
            let extra = vec![
                ("kkt_residual", format!("{:.3e}", s.kkt.max_residual())),
                ("patterns", s.patterns_examined.to_string()),
                ("qp_solves", s.qp_solves.to_string()),
            ];
            ("maxsnr", s.design, out.out, extra)
        }
        DesignKind::Compose { factors, out } => {
            let designs = factors
                .iter()
                .map(|f| Design::<f64>::parse_text(&inputs::read(f)?).map_err(Failure::from))
                .collect::<Outcome<Vec<_>>>()?;
            ("compose", compose_dary(&designs)?, out.out, vec![])
        }
    };
    let mut fields = design_fields(name, &d)?;
    fields.extend(extra);
    out.line(&fields);
    emit(out, path.as_deref(), d.to_text().into_bytes())
}

fn verify(args: VerifyArgs, out: &mut Output) -> Outcome {
    let text = inputs::read(&args.design)?;
    let mut fields: Vec<(&str, String)> = vec![("design", args.design.display().to_string())];
    let result = verify_checks(&args, &text, &mut fields);
    let status = if result.is_ok() { "ok" } else { "fail" };
    fields.insert(0, ("status", status.to_string()));
    if let Err(Failure::Verify(reason)) = &result {
        fields.push(("reason", quoted(reason)));
    }
    out.line(&fields);
    result
}

fn verify_checks(args: &VerifyArgs, text: &str, fields: &mut Vec<(&str, String)>) -> Outcome {
    let fail = |e: pqtrain::Error| Failure::Verify(e.to_string());
    let (train, declared) = parse_train::<f64>(text).map_err(fail)?;
    let tol = args.tolerance.unwrap_or(1e-10);
    let verified = train.null_order(tol);
    fields.push(("d", train.alphabet().to_string()));
    fields.push(("n", train.len().to_string()));
    fields.push(("declared_order", declared.to_string()));
    fields.push((
        "verified_order",
        verified.map_or("none".into(), |v| v.to_string()),
    ));
    fields.push(("channel_orders", channel_orders(&train, tol)));
    let gain = snr_gain(train.q()).map_err(fail)?;
    fields.push(("snr_gain", format!("{gain:.2}")));

    if let Some(path) = &args.waveform {
        let wtext = inputs::read(path)?;
        let (members, residual) = if wtext.contains(';') {
            let s = ParaunitaryMatrix::parse_csv(&wtext).map_err(fail)?;
            (s.size(), s.residual())
        } else {
            let rows = wtext
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(UnimodularSeq::parse_csv_line)
                .collect::<Result<Vec<_>, _>>()
                .map_err(fail)?;
            let residual = check_complementary(&rows).map_err(fail)?;
            (rows.len(), residual)
        };
        fields.push(("waveform_members", members.to_string()));
        fields.push(("waveform_residual", residual.to_string()));
        if residual != 0.0 {
            return Err(Failure::Verify(format!(
                "waveforms are not complementary (residual {residual})"
            )));
        }
        if members != train.alphabet() {
            return Err(Failure::Verify(format!(
                "waveform set has {members} members but the design alphabet is {}",
                train.alphabet()
            )));
        }
    }

    match verified {
        Some(v) if v >= declared => {}
        Some(v) => {
            return Err(Failure::Verify(format!(
                "declared null order {declared} but verified order is {v}"
            )))
        }
        None => {
            return Err(Failure::Verify(format!(
                "declared null order {declared} but no spectral null"
            )))
        }
    }

    if args.optimal {
        if train.alphabet() != 2 {
            return usage("--optimal applies to binary designs only");
        }
        let best = max_snr_design::<f64>(train.len(), declared, &MaxSnrOptions::default())?;
        let shortfall = 1.0 - gain / best.gain;
        fields.push(("max_snr_gain", format!("{:.6}", best.gain)));
        fields.push(("optimality_shortfall", format!("{shortfall:.3e}")));
        if shortfall > OPTIMALITY_TOLERANCE {
            return Err(Failure::Verify(format!(
                "SNR gain {gain:.6} is below the max-SNR optimum {:.6}",
                best.gain
            )));
        }
    }
    Ok(())
}

fn write_map(map: &AmbiguityMap<f64>, csv: Option<&Path>, pgm: Option<&Path>) -> Outcome {
    if let Some(p) = csv {
        inputs::write(p, map.to_csv().as_bytes())?;
    }
    if let Some(p) = pgm {
        inputs::write(p, &map.to_pgm())?;
    }
    Ok(())
}

fn band_text(lo: f64, hi: f64) -> String {
    format!("{lo}:{hi}")
}

fn ambiguity(args: AmbiguityArgs, out: &mut Output) -> Outcome {
    let train = inputs::design_train(&args.design)?;
    let grid = inputs::grid(args.grid.as_deref())?;
    let (lo, hi) = inputs::band(args.band.as_deref(), &grid)?;
    let d = train.alphabet();
    let waveform_id = match &args.waveform {
        Some(p) => p.display().to_string(),
        None => format!("golay{}", args.golay),
    };
    let mut fields = vec![
        ("design", args.design.clone()),
        ("d", d.to_string()),
        ("n", train.len().to_string()),
    ];

    if args.mimo {
        let s = inputs::paraunitary_matrix(d, args.golay, args.waveform.as_ref())?;
        if args.csv.is_none() && args.pgm.is_none() {
            return usage("--mimo needs --csv and/or --pgm");
        }
        let m = mimo_cross_ambiguity(&train, &s, &grid)?;
        let mut diagonal = f64::NEG_INFINITY;
        for i in 0..m.size() {
            diagonal = diagonal.max(m.entry(i, i).max_sidelobe_db(lo, hi)?);
            for j in 0..m.size() {
                let csv = args.csv.as_deref().map(|p| inputs::suffixed(p, i, j));
                let pgm = args.pgm.as_deref().map(|p| inputs::suffixed(p, i, j));
                write_map(m.entry(i, j), csv.as_deref(), pgm.as_deref())?;
            }
        }
        fields.extend([
            ("chip_len", s.chip_len().to_string()),
            ("grid_points", grid.len().to_string()),
            ("band", band_text(lo, hi)),
            ("max_diagonal_sidelobe_db", db(diagonal)),
            ("max_off_diagonal_db", db(m.max_off_diagonal_db(lo, hi)?)),
        ]);
        out.line(&fields);
        return Ok(());
    }

    let set = inputs::complementary_set(d, args.golay, args.waveform.as_ref())?;
    let map =
        cross_ambiguity_dary(&train, &set, &grid)?.with_labels(args.design.clone(), waveform_id);
    fields.extend([
        ("chip_len", map.chip_len().to_string()),
        ("delay_bins", map.delay_bins().to_string()),
        ("grid_points", grid.len().to_string()),
        ("band", band_text(lo, hi)),
        ("max_sidelobe_db", db(map.max_sidelobe_db(lo, hi)?)),
    ]);
    out.line(&fields);
    write_map(&map, args.csv.as_deref(), args.pgm.as_deref())?;
    if args.csv.is_none() && args.pgm.is_none() {
        out.stdout = Some(map.to_csv().into_bytes());
    }
    Ok(())
}

fn scene(args: SceneArgs, out: &mut Output) -> Outcome {
    let targets = parse_scene_targets::<f64>(&inputs::read(&args.file)?)?;
    let train = inputs::design_train(&args.design)?;
    let set = inputs::complementary_set(train.alphabet(), args.golay, args.waveform.as_ref())?;
    let grid = DopplerGrid64::parse_spec(&args.grid)?;
    let (lo, hi) = inputs::band(Some(&args.band), &grid)?;
    let scene = Scene::new(targets, train, set, grid)?;
    let map = render_scene(&scene);
    write_map(&map, args.csv.as_deref(), Some(&args.pgm))?;
    let report = visibility_report(&scene, lo, hi)?;
    out.line(&[
        ("design", args.design.clone()),
        ("targets", scene.targets().len().to_string()),
        ("reported", report.len().to_string()),
        ("band", band_text(lo, hi)),
        ("pgm", args.pgm.display().to_string()),
    ]);
    for v in report {
        let t = &scene.targets()[v.index];
        out.line(&[
            ("target", v.index.to_string()),
            ("delay_bin", t.delay_bin.to_string()),
            ("theta", scene.snapped_theta(v.index).to_string()),
            ("peak_db", db(v.peak_db)),
            ("interference_db", db(v.interference_db)),
            ("margin_db", db(v.margin_db)),
            ("visible", (v.margin_db > 0.0).to_string()),
        ]);
    }
    Ok(())
}

fn table1(n: usize, m: Option<usize>, out: &mut Output) -> Outcome {
    if n < 4 || !n.is_power_of_two() {
        return usage(format!("table1 needs N a power of two >= 4, got {n}"));
    }
    let m = m.unwrap_or(n / 2);
    let rows = [
        ("conventional", conventional_design::<f64>(n)?),
        ("ptm", ptm_design(n)?),
        (
            "maxsnr",
            max_snr_design(n, m, &MaxSnrOptions::default())?.design,
        ),
        ("binomial", binomial_design(n)?),
    ];
    for (name, d) in &rows {
        out.line(&design_fields(name, d)?);
    }
    Ok(())
}

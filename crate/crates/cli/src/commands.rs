//! Subcommand bodies. Each returns an [`Outcome`]; `main` renders it.

use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Value};

use perfval::almost::{lift_agreement_report, section_bound_report, section_solve};
use perfval::io::{parse_cut_module, parse_extension_file, parse_matrix_file, parse_section_file, Rational, RingSpec};
use perfval::length::{
    additivity_check, finiteness_check, lambda_cut, lambda_fp, pullback_report, random_presentation,
    random_triple, smith_oracle_report, subadditivity_check, zero_length_check,
};
use perfval::modpres::cyclic_decomposition;
use perfval::purity_lab::{
    build_extension, flatness_check, flatness_grid, frobenius_surjectivity_check,
    purity_ledger, tower_discriminants, tower_report,
};
use perfval::ring_core::rng::{ElementShape, Sampler};
use perfval::tilt::{residue_iso_check, sharp_multiplicativity_check, varpi_flat_check};
use perfval::{
    CutIdeal, CutModule, Exponent, ExtensionOrder, PresentationMatrix, Report, RingDescriptor,
    RingElement, TiltElement,
};

use crate::{CheckCmd, Failure, LengthCmd, Outcome, PurityCmd, RingArgs, TiltArgs};

type Desc = Arc<RingDescriptor>;

fn read(path: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("cannot read {path}: {e}")))
}

fn exponent(text: &str) -> Result<Exponent, Failure> {
    Ok(Exponent::parse(text)?)
}

fn ring(args: &RingArgs, mode: &str, prime: u32, precision: &str) -> Result<Desc, Failure> {
    let spec = RingSpec {
        mode: args.mode.clone().unwrap_or_else(|| mode.into()),
        prime: args.prime.unwrap_or(prime),
        precision: Rational::Text(args.precision.clone().unwrap_or_else(|| precision.into())),
    };
    Ok(spec.descriptor()?)
}

fn simple_ring(mode: &str, prime: u32, precision: &str) -> Result<Desc, Failure> {
    Ok(Arc::new(RingDescriptor::new(
        perfval::Mode::parse(mode)?,
        prime,
        exponent(precision)?,
    )?))
}

fn ring_json(d: &RingDescriptor) -> Value {
    json!({
        "mode": d.mode().name(),
        "prime": d.prime(),
        "precision": d.precision().to_string(),
    })
}

fn element_json(x: &RingElement) -> Value {
    json!({
        "value": x.to_string(),
        "valuation": x.valuation().to_string(),
        "exactness": if x.is_exact() { "exact" } else { "truncated" },
    })
}

fn matrix_json(a: &PresentationMatrix) -> Value {
    a.entries()
        .iter()
        .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>())
        .collect()
}

fn summary(reports: &[Report]) -> (usize, usize) {
    (reports.iter().filter(|r| r.passed()).count(), reports.len())
}

pub fn ring_eval(expr: &str, args: &RingArgs, op: &str, with: Option<&str>) -> Result<Outcome, Failure> {
    let d = ring(args, "char_p", 2, "4")?;
    let x = RingElement::parse(&d, expr)?;
    let other = || -> Result<RingElement, Failure> {
        let w = with.ok_or_else(|| Failure::Io(format!("--op {op} needs --with")))?;
        Ok(RingElement::parse(&d, w)?)
    };
    let result = match op {
        "show" => x.clone(),
        "add" => x.add(&other()?)?,
        "sub" => x.sub(&other()?)?,
        "mul" => x.mul(&other()?)?,
        "div" => x.divide(&other()?)?,
        "neg" => x.neg(),
        "invert" => x.invert_unit()?,
        "frobenius" => x.frobenius(),
        "pth-root" => x.pth_root()?,
        _ => return Err(Failure::Io(format!("unknown --op {op}"))),
    };
    let text = vec![
        format!("{result}"),
        format!("valuation {}", result.valuation()),
        format!("{}", if result.is_exact() { "exact" } else { "truncated" }),
    ];
    Ok(Outcome {
        name: "ring eval",
        value: json!({ "ring": ring_json(&d), "op": op, "input": x.to_string(), "result": element_json(&result) }),
        reports: vec![],
        text,
    })
}

/// A `--cut` argument: an existing file, else an inline JSON literal.
fn cut_source(arg: &str) -> Result<String, Failure> {
    if Path::new(arg).is_file() {
        read(arg)
    } else {
        Ok(arg.to_string())
    }
}

pub fn length(cmd: &LengthCmd) -> Result<Outcome, Failure> {
    match cmd {
        LengthCmd::Fp { matrix } => {
            let a: PresentationMatrix = parse_matrix_file(&read(matrix)?)?;
            let lam = lambda_fp(&a)?;
            let module = cyclic_decomposition(&a).ok().map(|m| m.to_string());
            let mut text = vec![format!("lambda = {lam}")];
            if let Some(m) = &module {
                text.push(format!("module = {m}"));
            }
            Ok(Outcome {
                name: "length fp",
                value: json!({
                    "ring": ring_json(a.descriptor()),
                    "lambda": lam.to_string(),
                    "decomposition": module,
                }),
                reports: vec![],
                text,
            })
        }
        LengthCmd::Cut { cut, b_valuation } => {
            let m: CutModule = parse_cut_module(&cut_source(cut)?)?;
            let lam = lambda_cut(&m);
            let mut value = json!({ "module": m.to_string(), "lambda": lam.to_string() });
            let mut text = vec![format!("module = {m}"), format!("lambda = {lam}")];
            let mut reports = vec![];
            if let Some(vb) = b_valuation {
                let vb = exponent(vb)?;
                if !vb.is_positive() {
                    return Err(Failure::Io("--b-valuation must be positive".into()));
                }
                let image = m.scalar_image_val(&vb);
                let lam_b = lambda_cut(&image);
                value["bM"] = json!(image.to_string());
                value["lambda_bM"] = json!(lam_b.to_string());
                text.push(format!("bM = {image}"));
                text.push(format!("lambda(bM) = {lam_b}"));
                reports.push(finiteness_check(&m, &vb));
            }
            Ok(Outcome {
                name: "length cut",
                value,
                reports,
                text,
            })
        }
    }
}

/// Presentations with `rows <= 4` generators and `rows..=6` relations.
fn random_corpus(desc: &Desc, trials: usize, seed: u64) -> Vec<PresentationMatrix> {
    (0..trials)
        .map(|i| {
            let mut s = Sampler::for_trial(seed, i as u64);
            let rows = s.between(1, 4) as usize;
            let cols = s.between(rows as u64, 6) as usize;
            random_presentation(desc, rows, cols, ElementShape::default(), &mut s)
        })
        .collect()
}

pub fn check(cmd: &CheckCmd, seed: u64) -> Result<Outcome, Failure> {
    match cmd {
        CheckCmd::Pullback {
            prime,
            trials,
            precision,
            matrix,
            oracle,
        } => {
            let d = simple_ring("char_p", *prime, precision)?;
            let mut corpus = Vec::new();
            if let Some(path) = matrix {
                let a: PresentationMatrix = parse_matrix_file(&read(path)?)?;
                corpus.push(a.reinterpret(&d).map_err(|_| {
                    Failure::Io("--matrix must use the ring given by --prime/--precision".into())
                })?);
            }
            corpus.extend(random_corpus(&d, *trials, seed));
            let mut reports = Vec::new();
            for a in &corpus {
                reports.push(pullback_report(a)?);
                if *oracle {
                    reports.push(smith_oracle_report(a)?);
                }
            }
            let (ok, total) = summary(&reports);
            Ok(Outcome {
                name: "check pullback",
                value: json!({ "ring": ring_json(&d), "seed": seed, "matrices": corpus.len(), "passed": ok, "total": total }),
                text: vec![format!("{} matrices, char p = {prime}, seed {seed}", corpus.len())],
                reports,
            })
        }
        CheckCmd::Additivity {
            prime,
            trials,
            precision,
        } => {
            let d = simple_ring("char_p", *prime, precision)?;
            let mut reports = Vec::new();
            let half = d.precision().div_int(2);
            for i in 0..*trials {
                let mut s = Sampler::for_trial(seed, i as u64);
                let t = random_triple(&d, &mut s);
                reports.push(additivity_check(&t));
                let va = s.exponent(*prime, 3, &Exponent::zero(), &half);
                let vb = s.exponent(*prime, 3, &Exponent::zero(), &half);
                reports.push(subadditivity_check(&t, &va, &vb));
                let vb = s.exponent(*prime, 3, &Exponent::inv_p_pow(*prime, 3), &half);
                reports.push(finiteness_check(&t.middle, &vb));
            }
            // V/m_V: nonzero, length 0
            reports.push(zero_length_check(&CutModule::cyclic(CutIdeal::open(Exponent::zero()))));
            let (ok, total) = summary(&reports);
            Ok(Outcome {
                name: "check additivity",
                value: json!({ "ring": ring_json(&d), "seed": seed, "passed": ok, "total": total }),
                text: vec![format!("{trials} triples, seed {seed}")],
                reports,
            })
        }
        CheckCmd::Flatness {
            prime,
            jmax,
            precision,
            a,
        } => {
            let d = simple_ring("mixed", *prime, precision)?;
            let reports = match a {
                Some(a) => vec![flatness_check(&RingElement::parse(&d, a)?)?],
                None => flatness_grid(&d, *jmax)?,
            };
            let text = reports
                .iter()
                .map(|r| {
                    format!(
                        "v(a) = {}: lambda {} = {} ({})",
                        r.witness["v_a"].as_str().unwrap_or("?"),
                        r.lhs,
                        r.rhs,
                        r.verdict.as_str()
                    )
                })
                .collect();
            Ok(Outcome {
                name: "check flatness",
                value: json!({ "ring": ring_json(&d) }),
                reports,
                text,
            })
        }
    }
}

pub fn tilt(args: &TiltArgs, seed: u64) -> Result<Outcome, Failure> {
    let d = simple_ring("mixed", args.prime, &args.precision)?;
    if let Some(c) = &args.components {
        let x = TiltElement::parse(&d, c)?;
        let sharp = x.sharp();
        let flat = x.val_flat();
        return Ok(Outcome {
            name: "tilt",
            value: json!({
                "ring": ring_json(&d),
                "element": x.to_string(),
                "depth": x.depth(),
                "pr": x.pr().to_string(),
                "sharp": sharp.to_string(),
                "sharp_cap": x.sharp_cap().to_string(),
                "val_flat": flat.to_string(),
            }),
            reports: vec![],
            text: vec![
                format!("x = {x}"),
                format!("pr(x) = {}", x.pr()),
                format!("x^sharp = {sharp} (mod p^{})", x.sharp_cap()),
                format!("val_flat(x) = {flat}"),
            ],
        });
    }
    if args.depth == 0 {
        return Err(Failure::Io("--depth must be at least 1".into()));
    }
    let depths: Vec<usize> = (1..=args.depth).collect();
    let mut reports = varpi_flat_check(&d, &depths)?;
    reports.extend(sharp_multiplicativity_check(&d, args.depth, args.samples, seed)?);
    reports.extend(residue_iso_check(&d, args.depth, args.samples, seed)?);
    let (ok, total) = summary(&reports);
    Ok(Outcome {
        name: "tilt",
        value: json!({ "ring": ring_json(&d), "depth": args.depth, "samples": args.samples, "seed": seed, "passed": ok, "total": total }),
        reports,
        text: vec![format!("depth {}, {} samples, seed {seed}", args.depth, args.samples)],
    })
}

pub fn section(path: &str, lift: Option<u32>) -> Result<Outcome, Failure> {
    let problem = parse_section_file(&read(path)?)?;
    let sol = section_solve(&problem)?;
    let mut reports = vec![section_bound_report(&problem)?];
    if let Some(l) = lift {
        if l == 0 {
            return Err(Failure::Io("--lift must be at least 1".into()));
        }
        reports.push(lift_agreement_report(&problem, l)?);
    }
    let text = vec![
        format!("delta_min = {}", sol.delta_min),
        format!("bound 1/p^{} + 2 alpha = {}", problem.k, sol.bound),
        format!("g = {}", matrix_json(&sol.g)),
    ];
    Ok(Outcome {
        name: "section solve",
        value: json!({
            "ring": ring_json(problem.phi.descriptor()),
            "delta_min": sol.delta_min.to_string(),
            "alpha": sol.alpha.to_string(),
            "bound": sol.bound.to_string(),
            "g": matrix_json(&sol.g),
        }),
        reports,
        text,
    })
}

fn load_order(path: &str, fallback: &Desc) -> Result<ExtensionOrder, Failure> {
    let spec = parse_extension_file(&read(path)?, Some(fallback))?;
    Ok(build_extension(&spec)?)
}

fn order_json(order: &ExtensionOrder) -> Value {
    json!({
        "ring": ring_json(order.descriptor()),
        "degree": order.degree(),
        "basis_exponents": order.basis_exponents().iter().map(|e| e.to_string()).collect::<Vec<_>>(),
    })
}

pub fn purity(cmd: &PurityCmd, seed: u64) -> Result<Outcome, Failure> {
    match cmd {
        PurityCmd::Ledger { extension, b, ring: r } => {
            let order = load_order(extension, &ring(r, "mixed", 3, "4")?)?;
            let b = RingElement::parse(order.descriptor(), b)?;
            let ledger = purity_ledger(&order, &b)?;
            let mut value = ledger.to_json();
            value["order"] = order_json(&order);
            Ok(Outcome {
                name: "purity ledger",
                value,
                text: ledger.table().lines().map(str::to_string).collect(),
                reports: ledger.chain,
            })
        }
        PurityCmd::Tower { extension, n_max, ring: r } => {
            let d = ring(r, "char_p", 2, "4")?;
            let spec = parse_extension_file(&read(extension)?, Some(&d))?;
            let order = build_extension(&spec)?;
            let ds = tower_discriminants(&spec, *n_max)?;
            let report = tower_report(&spec, *n_max)?;
            let text = ds
                .iter()
                .enumerate()
                .map(|(n, v)| format!("n = {n}: v(disc) = {v}"))
                .collect();
            Ok(Outcome {
                name: "purity tower",
                value: json!({
                    "order": order_json(&order),
                    "discriminants": ds.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                }),
                reports: vec![report],
                text,
            })
        }
        PurityCmd::Frobsurj { extension, samples, ring: r } => {
            let d = ring(r, "char_p", 2, "4")?;
            let order = load_order(extension, &d)?;
            let report = frobenius_surjectivity_check(&order, *samples, seed)?;
            Ok(Outcome {
                name: "purity frobsurj",
                value: json!({ "order": order_json(&order), "seed": seed }),
                text: vec![format!("roots found: {}", report.lhs)],
                reports: vec![report],
            })
        }
    }
}

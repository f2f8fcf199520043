//! Command-line front end: load groups, presentations and polynomials from
//! JSON, run the library operations, print reports and write certificates.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use gradalg::catalog::catalog;
use gradalg::cocycle::Cocycle;
use gradalg::finite_group::{Elem, Group, GroupSpec, Subgroup};
use gradalg::graded_poly::{
    assignment_serde, binomial_lambda, build_binomial_embedded, build_block_probe_scoped,
    build_global_probe, is_identity_with, regev, AlternationScope, BasisAssignment,
    GradedPolynomial, IdentityVerdict, PolyError, VarTag, DEFAULT_BUDGET, DEFAULT_SIZE_CAP,
};
use gradalg::isomorphism::{
    equivalent, separate_with, verify_moves, verify_separation, IsomorphismError, MoveSequence,
    SeparationCertificate, SeparationOutcome, Side,
};
use gradalg::presentation::{Presentation, PresentationFile};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "gradalg",
    version,
    about = "Presentations of graded simple algebras and their graded identities"
)]
struct Cli {
    /// Search nodes allowed per identity check.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Store cocycles of loaded presentations with this root order.
    #[arg(long, global = true)]
    root_order: Option<u32>,
    /// Worker threads for identity checks.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Also write a machine-readable report to this file.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Run the built-in catalog and print the pairwise matrix.
    #[arg(long)]
    catalog: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Check that input files parse to valid objects.
    Validate {
        #[arg(short, long)]
        presentation: Option<PathBuf>,
        #[arg(short, long)]
        group: Option<PathBuf>,
        /// Polynomial file.
        #[arg(short = 'f', long)]
        polynomial: Option<PathBuf>,
    },
    /// Dimension of every homogeneous component.
    Dims {
        #[arg(short, long)]
        presentation: PathBuf,
    },
    /// Block decomposition of the part graded by a subgroup.
    Blocks {
        #[arg(short, long)]
        presentation: PathBuf,
        /// Generators of the subgroup, as labels or indices (default: the
        /// whole group).
        #[arg(short = 'n', long, value_delimiter = ',')]
        subgroup: Vec<String>,
    },
    /// Invariants kept by every basic move.
    Invariants {
        #[arg(short, long)]
        presentation: PathBuf,
    },
    /// Decide equivalence; write the move sequence when there is one.
    Equiv {
        #[arg(short)]
        a: PathBuf,
        #[arg(short)]
        b: PathBuf,
        /// Certificate output file.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Find a graded polynomial separating two presentations.
    Separate {
        #[arg(short)]
        a: PathBuf,
        #[arg(short)]
        b: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Decide whether a polynomial is a graded identity.
    IdentityCheck {
        #[arg(short, long)]
        presentation: PathBuf,
        #[arg(short = 'f', long)]
        polynomial: PathBuf,
    },
    /// Build a polynomial.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        /// Polynomial output file.
        #[arg(short, long, global = true)]
        out: Option<PathBuf>,
    },
    /// Replay a certificate written by `equiv` or `separate`.
    Verify {
        #[arg(short, long)]
        certificate: PathBuf,
    },
}

#[derive(Subcommand)]
enum GenKind {
    /// Graded central polynomial for r x r matrices.
    Regev {
        /// Group name (C4, S3, D4, ...) or group file.
        #[arg(short, long)]
        group: String,
        #[arg(short, long)]
        r: usize,
        /// Degree of the first variable.
        #[arg(short, long, default_value = "e")]
        degree: String,
    },
    /// Binomial `x_1...x_s - lambda x_pi(1)...x_pi(s)` vanishing on the
    /// twisted group algebra of a presentation.
    Binomial {
        #[arg(short, long)]
        presentation: PathBuf,
        /// Degrees, elements of H.
        #[arg(short, long, value_delimiter = ',')]
        degrees: Vec<String>,
        /// 0-based permutation.
        #[arg(long, value_delimiter = ',')]
        pi: Vec<usize>,
    },
    /// Frame-and-alternation probe over a subgroup.
    Probe {
        #[arg(short, long)]
        presentation: PathBuf,
        /// Generators of T (default: the whole group).
        #[arg(short = 'n', long, value_delimiter = ',')]
        subgroup: Vec<String>,
        /// One alternation set per degree instead of per block and degree.
        #[arg(long)]
        per_segment: bool,
    },
    /// Probe through every conjugate of H met by the tuple.
    GlobalProbe {
        #[arg(short, long)]
        presentation: PathBuf,
        /// Splice cocycle separators after full blocks.
        #[arg(long)]
        with_regev: bool,
    },
}

/// Certificate file written by `equiv` and `separate`.
#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum CertificateFile {
    Equivalence {
        target: Presentation,
        sequence: MoveSequence,
    },
    Separation {
        a: Presentation,
        b: Presentation,
        certificate: SeparationCertificate,
    },
}

/// Verdict kind, mapped to the exit status.
enum Status {
    Definite,
    Inconclusive,
    Rejected,
}

struct Ctx {
    budget: u64,
    root_order: Option<u32>,
    threads: usize,
    report: Value,
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text)
        .map_err(|e| anyhow!("{}:{}:{}: {}", path.display(), e.line(), e.column(), e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").with_context(|| format!("cannot write {}", path.display()))
}

impl Ctx {
    fn presentation(&self, path: &Path) -> Result<Presentation> {
        let file: PresentationFile = read_json(path)?;
        let p = file
            .build()
            .map_err(|e| anyhow!("{}: {}", path.display(), e))?;
        match self.root_order {
            None => Ok(p),
            Some(n) => {
                let c = p
                    .cocycle()
                    .lift(n)
                    .map_err(|e| anyhow!("--root-order {n}: {e}"))?;
                Ok(Presentation::new(
                    p.ambient().clone(),
                    p.subgroup().clone(),
                    c,
                    p.tuple().to_vec(),
                )?)
            }
        }
    }
}

fn group_arg(s: &str) -> Result<Group> {
    if Path::new(s).is_file() {
        let spec: GroupSpec = read_json(Path::new(s))?;
        return Ok(spec.build()?);
    }
    Ok(Group::named(s)?)
}

/// A group element given by label or by index.
fn element(g: &Group, s: &str) -> Result<Elem> {
    let s = s.trim();
    if let Some(x) = g.elements().find(|&x| g.label(x) == s) {
        return Ok(x);
    }
    let x: Elem = s
        .parse()
        .map_err(|_| anyhow!("unknown group element {s:?}"))?;
    Ok(g.check_elem(x)?)
}

fn subgroup_arg(g: &Group, gens: &[String]) -> Result<Subgroup> {
    if gens.is_empty() {
        return Ok(g.whole());
    }
    let seed = gens
        .iter()
        .map(|s| element(g, s))
        .collect::<Result<Vec<_>>>()?;
    Ok(g.subgroup_closure(&seed)?)
}

fn render_assignment(
    poly: &GradedPolynomial,
    p: &Presentation,
    a: &BasisAssignment,
) -> Vec<String> {
    a.iter()
        .map(|(v, b)| {
            let label = poly
                .leaf_variables()
                .iter()
                .find(|x| x.id == *v)
                .map_or_else(
                    || v.to_string(),
                    |x| {
                        let letter = match x.tag {
                            VarTag::Frame => 'y',
                            VarTag::Bridge => 'w',
                            _ => 'x',
                        };
                        format!("{letter}_{{{},{}}}", v.0, p.ambient().label(x.degree))
                    },
                );
            format!("{label} = {}", p.render_basis(b))
        })
        .collect()
}

fn assignment_json(a: &BasisAssignment) -> Result<Value> {
    Ok(assignment_serde::serialize(
        a,
        serde_json::value::Serializer,
    )?)
}

fn dims_table(p: &Presentation) -> Vec<(String, usize)> {
    let g = p.ambient();
    p.component_dimensions()
        .into_iter()
        .enumerate()
        .map(|(x, d)| (g.label(x), d))
        .collect()
}

fn cmd_validate(
    ctx: &mut Ctx,
    presentation: Option<PathBuf>,
    group: Option<PathBuf>,
    polynomial: Option<PathBuf>,
) -> Result<Status> {
    if presentation.is_none() && group.is_none() && polynomial.is_none() {
        bail!("nothing to validate: give --presentation, --group or --polynomial");
    }
    let mut checked = Vec::new();
    if let Some(path) = group {
        let g = read_json::<GroupSpec>(&path)?.build()?;
        println!(
            "group: order {}, {}",
            g.order(),
            if g.is_abelian() {
                "abelian"
            } else {
                "nonabelian"
            }
        );
        checked.push(json!({"group": path, "order": g.order()}));
    }
    if let Some(path) = presentation {
        let p = ctx.presentation(&path)?;
        if let Some((x, y, z)) = p.associativity_violation() {
            bail!("structure constants are not associative at ({x}, {y}, {z})");
        }
        println!("presentation: {p}");
        println!(
            "dimension {} = |H| r^2 = {} * {}^2",
            p.dim(),
            p.subgroup().order(),
            p.matrix_size()
        );
        checked.push(json!({"presentation": path, "dim": p.dim()}));
    }
    if let Some(path) = polynomial {
        let poly: GradedPolynomial = read_json(&path)?;
        println!(
            "polynomial: {} variables, {} monomials",
            poly.leaf_variables().len(),
            poly.monomials().len()
        );
        checked.push(json!({"polynomial": path, "size": poly.size().to_string()}));
    }
    println!("valid");
    ctx.report = json!({"valid": true, "checked": checked});
    Ok(Status::Definite)
}

fn cmd_dims(ctx: &mut Ctx, path: &Path) -> Result<Status> {
    let p = ctx.presentation(path)?;
    println!("{p}");
    println!("{:>8}  dim", "degree");
    let table = dims_table(&p);
    for (label, d) in &table {
        println!("{label:>8}  {d}");
    }
    println!("{:>8}  {}", "total", p.dim());
    ctx.report = json!({
        "dims": table.iter().map(|(l, d)| json!({"degree": l, "dim": d})).collect::<Vec<_>>(),
        "total": p.dim(),
    });
    Ok(Status::Definite)
}

fn cmd_blocks(ctx: &mut Ctx, path: &Path, gens: &[String]) -> Result<Status> {
    let p = ctx.presentation(path)?;
    let g = p.ambient();
    let n = subgroup_arg(g, gens)?;
    let dec = p.block_decomposition(&n)?;
    println!("{p}");
    println!("N = {{{}}}", p.labels_of(n.elements()));
    let mut blocks = Vec::new();
    for (k, b) in dec.blocks.iter().enumerate() {
        let indices: Vec<usize> = b.indices.iter().map(|i| i + 1).collect();
        println!(
            "block {}: positions {:?}, group part {{{}}}, {} page(s) of {}x{} matrices, tuple ({})",
            k + 1,
            indices,
            p.labels_of(b.omega.elements()),
            b.pages,
            b.matrix_size,
            b.matrix_size,
            p.labels_of(&b.coset_tuple)
        );
        blocks.push(json!({
            "positions": indices,
            "omega": b.omega.elements(),
            "pages": b.pages,
            "matrix_size": b.matrix_size,
            "coset_tuple": b.coset_tuple,
            "presentation": b.presentation,
        }));
    }
    ctx.report = json!({"subgroup": n.elements(), "blocks": blocks});
    Ok(Status::Definite)
}

fn cmd_invariants(ctx: &mut Ctx, path: &Path) -> Result<Status> {
    let p = ctx.presentation(path)?;
    let g = p.ambient();
    let rep = p.invariant_report();
    println!("{p}");
    println!(
        "dims: {}",
        dims_table(&p)
            .iter()
            .map(|(l, d)| format!("{l}:{d}"))
            .collect::<Vec<_>>()
            .join(" ")
    );
    println!(
        "|H| = {}, least conjugate {{{}}}",
        rep.h_order,
        p.labels_of(&rep.h_conjugacy_key)
    );
    println!("coset multiplicities: {:?}", rep.coset_multiplicities);
    for (bb, cc) in rep.big_blocks.iter().zip(&rep.cocycle_classes) {
        println!(
            "normalizer coset of {}: multiplicities {:?}, {} cocycle class(es) with counts {:?}",
            g.label(bb.coset_key),
            bb.multiplicities,
            cc.classes.len(),
            cc.classes.iter().map(|(_, k)| *k).collect::<Vec<_>>()
        );
    }
    println!("tuple key: ({})", p.labels_of(&rep.tuple_key));
    ctx.report = json!({
        "dims": rep.dims,
        "coset_multiplicities": rep.coset_multiplicities,
        "h_order": rep.h_order,
        "h_conjugacy_key": rep.h_conjugacy_key,
        "big_blocks": rep.big_blocks,
        "tuple_key": rep.tuple_key,
        "class_counts": rep.cocycle_classes.iter()
            .map(|c| c.classes.iter().map(|(_, k)| *k).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    });
    Ok(Status::Definite)
}

fn cmd_equiv(ctx: &mut Ctx, a: &Path, b: &Path, out: Option<PathBuf>) -> Result<Status> {
    let (pa, pb) = (ctx.presentation(a)?, ctx.presentation(b)?);
    match equivalent(&pa, &pb)? {
        Some(seq) => {
            println!("EQUIVALENT");
            let mut cur = seq.start.clone();
            for (k, m) in seq.moves.iter().enumerate() {
                println!("  {}. {}", k + 1, m.render(&cur));
                cur = cur.apply_move(m)?;
            }
            if seq.moves.is_empty() {
                println!("  (identical presentations)");
            }
            let cert = CertificateFile::Equivalence {
                target: pb,
                sequence: seq.clone(),
            };
            if let Some(path) = out {
                write_json(&path, &cert)?;
                println!("certificate written to {}", path.display());
            }
            ctx.report = json!({"equivalent": true, "certificate": cert});
        }
        None => {
            println!("NOT EQUIVALENT");
            let diff = pa.invariant_report().differences(&pb.invariant_report());
            for d in &diff {
                println!("  {d}");
            }
            if diff.is_empty() {
                println!("  invariants agree; no conjugator matches tuple and cocycle");
            }
            ctx.report = json!({"equivalent": false, "differences": diff});
        }
    }
    Ok(Status::Definite)
}

fn cmd_separate(ctx: &mut Ctx, a: &Path, b: &Path, out: Option<PathBuf>) -> Result<Status> {
    let (pa, pb) = (ctx.presentation(a)?, ctx.presentation(b)?);
    match separate_with(&pa, &pb, ctx.budget, ctx.threads) {
        Ok(SeparationOutcome::Separated(c)) => {
            let (id, other) = match c.identity_side {
                Side::A => ("A", &pb),
                Side::B => ("B", &pa),
            };
            println!("SEPARATED ({:?})", c.step);
            println!(
                "identity of {id}, verified {:?} in {} nodes",
                c.verification_mode, c.nodes
            );
            println!("f = {}", c.polynomial.render(pa.ambient()));
            println!("nonzero on the other side at:");
            for line in render_assignment(&c.polynomial, other, &c.witness) {
                println!("  {line}");
            }
            println!("value: {}", c.value.render(other));
            let cert = CertificateFile::Separation {
                a: pa,
                b: pb,
                certificate: c,
            };
            if let Some(path) = out {
                write_json(&path, &cert)?;
                println!("certificate written to {}", path.display());
            }
            ctx.report = json!({"separated": true, "certificate": cert});
            Ok(Status::Definite)
        }
        Ok(SeparationOutcome::Inconclusive { attempts, spent }) => {
            println!("INCONCLUSIVE after {attempts} candidate(s), {spent} nodes");
            ctx.report = json!({"separated": null, "attempts": attempts, "spent": spent});
            Ok(Status::Inconclusive)
        }
        Err(IsomorphismError::PresentationsEquivalent) => {
            println!("EQUIVALENT: the presentations have the same graded identities");
            ctx.report = json!({"separated": false, "equivalent": true});
            Ok(Status::Rejected)
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_identity_check(ctx: &mut Ctx, pres: &Path, poly: &Path) -> Result<Status> {
    let p = ctx.presentation(pres)?;
    let f: GradedPolynomial = read_json(poly)?;
    let verdict = is_identity_with(&f, &p, ctx.budget, ctx.threads);
    let status = match &verdict {
        IdentityVerdict::Identity { proof } => {
            if proof.pigeonhole {
                println!("IDENTITY (an alternation set is larger than its component)");
            } else {
                println!("IDENTITY ({} nodes)", proof.nodes);
            }
            Status::Definite
        }
        IdentityVerdict::NonIdentity { witness, value } => {
            println!("NONIDENTITY");
            for line in render_assignment(&f, &p, witness) {
                println!("  {line}");
            }
            println!("value: {}", value.render(&p));
            Status::Definite
        }
        IdentityVerdict::Inconclusive { spent } => {
            println!("INCONCLUSIVE: budget of {spent} nodes spent");
            Status::Inconclusive
        }
    };
    ctx.report = serde_json::to_value(&verdict)?;
    Ok(status)
}

fn cmd_gen(ctx: &mut Ctx, kind: GenKind, out: Option<PathBuf>) -> Result<Status> {
    let (poly, group, extra) = match kind {
        GenKind::Regev { group, r, degree } => {
            let g = group_arg(&group)?;
            let h = element(&g, &degree)?;
            (regev(r, h, g.identity()), g, Value::Null)
        }
        GenKind::Binomial {
            presentation,
            degrees,
            pi,
        } => {
            let p = ctx.presentation(&presentation)?;
            let g = p.ambient();
            let h = p.subgroup();
            let pos = degrees
                .iter()
                .map(|s| {
                    let x = element(g, s)?;
                    h.position(x)
                        .ok_or_else(|| anyhow!("{s} is not an element of H"))
                })
                .collect::<Result<Vec<_>>>()?;
            let c: &Cocycle = p.cocycle();
            let lambda = binomial_lambda(c, &pos, &pi)?;
            println!("lambda = {lambda}");
            let f = build_binomial_embedded(c, h.elements(), &pos, &pi)?;
            (f, g.clone(), json!({"lambda": lambda}))
        }
        GenKind::Probe {
            presentation,
            subgroup,
            per_segment,
        } => {
            let p = ctx.presentation(&presentation)?;
            let t = subgroup_arg(p.ambient(), &subgroup)?;
            let scope = if per_segment {
                AlternationScope::PerSegment
            } else {
                AlternationScope::PerBlock
            };
            let probe = build_block_probe_scoped(&p, &t, scope)?;
            println!("nonzero at:");
            for line in render_assignment(&probe.polynomial, &p, &probe.witness) {
                println!("  {line}");
            }
            let witness = assignment_json(&probe.witness)?;
            (
                probe.polynomial,
                p.ambient().clone(),
                json!({"witness": witness}),
            )
        }
        GenKind::GlobalProbe {
            presentation,
            with_regev,
        } => {
            let p = ctx.presentation(&presentation)?;
            let probe = match build_global_probe(&p, with_regev, DEFAULT_SIZE_CAP) {
                Ok(probe) => probe,
                Err(PolyError::BudgetExceeded { size, cap }) => {
                    println!("INCONCLUSIVE: polynomial size {size} exceeds {cap}");
                    ctx.report = json!({"size": size.to_string(), "cap": cap.to_string()});
                    return Ok(Status::Inconclusive);
                }
                Err(e) => return Err(e.into()),
            };
            let witness = assignment_json(&probe.witness)?;
            (
                probe.polynomial,
                p.ambient().clone(),
                json!({"witness": witness}),
            )
        }
    };
    println!("f = {}", poly.render(&group));
    println!(
        "{} variables, {} expanded monomials",
        poly.leaf_variables().len(),
        poly.expanded_len()
    );
    if let Some(path) = out {
        write_json(&path, &poly)?;
        println!("polynomial written to {}", path.display());
    }
    ctx.report = json!({"polynomial": poly, "details": extra});
    Ok(Status::Definite)
}

fn cmd_verify(ctx: &mut Ctx, path: &Path) -> Result<Status> {
    let cert: CertificateFile = read_json(path)?;
    let ok = match &cert {
        CertificateFile::Equivalence { target, sequence } => {
            let ok = verify_moves(sequence, target);
            println!(
                "equivalence certificate: {} move(s) replay to {}",
                sequence.moves.len(),
                if ok {
                    "the target"
                } else {
                    "a different presentation"
                }
            );
            ok
        }
        CertificateFile::Separation { a, b, certificate } => {
            let ok = verify_separation(certificate, a, b, ctx.budget);
            println!(
                "separation certificate: {}",
                if ok {
                    "identity confirmed and witness nonzero"
                } else {
                    "does not verify"
                }
            );
            ok
        }
    };
    println!("{}", if ok { "VALID" } else { "INVALID" });
    ctx.report = json!({"valid": ok});
    Ok(if ok {
        Status::Definite
    } else {
        Status::Rejected
    })
}

fn run_catalog(ctx: &mut Ctx) -> Result<Status> {
    let cat = catalog();
    let mut incoherent = Vec::new();
    let mut rows = Vec::new();
    println!("legend: = equivalent, S separated, ? inconclusive, ! incoherent, blank: other group");
    for (i, a) in cat.iter().enumerate() {
        let mut row = String::new();
        for b in &cat {
            if a.group_name() != b.group_name() {
                row.push(' ');
                continue;
            }
            let (p, q) = (&a.presentation, &b.presentation);
            let eq = equivalent(p, q)?;
            let mark = match (&eq, separate_with(p, q, ctx.budget, ctx.threads)) {
                (Some(seq), Err(IsomorphismError::PresentationsEquivalent))
                    if verify_moves(seq, q) =>
                {
                    '='
                }
                (None, Ok(SeparationOutcome::Separated(c)))
                    if verify_separation(&c, p, q, ctx.budget) =>
                {
                    'S'
                }
                (None, Ok(SeparationOutcome::Inconclusive { .. })) => '?',
                _ => '!',
            };
            if mark != '=' && mark != 'S' {
                incoherent.push(format!("{} vs {}", a.name, b.name));
            }
            row.push(mark);
        }
        println!("{:>3} {row} {}", i + 1, a.name);
        rows.push(json!({"name": a.name, "kind": a.kind(), "row": row}));
    }
    let pass = incoherent.is_empty();
    println!(
        "{}: {} entries, {} unresolved pair(s)",
        if pass { "PASS" } else { "FAIL" },
        cat.len(),
        incoherent.len()
    );
    for pair in &incoherent {
        println!("  {pair}");
    }
    ctx.report = json!({"pass": pass, "rows": rows, "unresolved": incoherent});
    Ok(if pass {
        Status::Definite
    } else {
        Status::Rejected
    })
}

fn run(cli: Cli, ctx: &mut Ctx) -> Result<Status> {
    if cli.catalog {
        return run_catalog(ctx);
    }
    let Some(command) = cli.command else {
        bail!("no command given; see --help");
    };
    match command {
        Command::Validate {
            presentation,
            group,
            polynomial,
        } => cmd_validate(ctx, presentation, group, polynomial),
        Command::Dims { presentation } => cmd_dims(ctx, &presentation),
        Command::Blocks {
            presentation,
            subgroup,
        } => cmd_blocks(ctx, &presentation, &subgroup),
        Command::Invariants { presentation } => cmd_invariants(ctx, &presentation),
        Command::Equiv { a, b, out } => cmd_equiv(ctx, &a, &b, out),
        Command::Separate { a, b, out } => cmd_separate(ctx, &a, &b, out),
        Command::IdentityCheck {
            presentation,
            polynomial,
        } => cmd_identity_check(ctx, &presentation, &polynomial),
        Command::Gen { kind, out } => cmd_gen(ctx, kind, out),
        Command::Verify { certificate } => cmd_verify(ctx, &certificate),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json_path = cli.json.clone();
    let mut ctx = Ctx {
        budget: cli.budget,
        root_order: cli.root_order,
        threads: cli.threads.max(1),
        report: Value::Null,
    };
    let status = match run(cli, &mut ctx) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    if let Some(path) = json_path {
        if let Err(e) = write_json(&path, &ctx.report) {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    }
    match status {
        Status::Definite => ExitCode::SUCCESS,
        Status::Inconclusive => ExitCode::from(2),
        Status::Rejected => ExitCode::from(1),
    }
}

//! Command-line front end: validate marked fansy divisors, compute Chow group
//! presentations and effective generators, and cross-check toric downgrades
//! against the toric presentation.

use clap::{Parser, Subcommand};
use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use tvchow::build::{downgrade, BuildError};
use tvchow::chow::{
    all_presentations, fulton_sturmfels, presentation, ChowError, ChowPresentation,
};
use tvchow::document::{
    fixture_document, fixture_fan, CrosscheckDoc, DegreeDoc, DocumentError, EffDoc, FanFile,
    InputDocument, OutputDocument,
};
use tvchow::effcone::EffConeReport;
use tvchow::fansy::FansyError;
use tvchow::MarkedFansyDivisor;

#[derive(Parser)]
#[command(
    name = "tvchow",
    version,
    about = "Chow groups of complexity-one T-varieties"
)]
struct Cli {
    /// Emit the JSON output document instead of tables.
    #[arg(long, global = true)]
    json: bool,
    /// Write the output to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the conditions on a marked fansy divisor.
    Validate {
        #[arg(default_value = "-")]
        file: String,
    },
    /// Presentations of A_k (all k unless --k is given).
    Chow {
        #[arg(default_value = "-")]
        file: String,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, conflicts_with = "k")]
        all: bool,
    },
    /// Generators of the effective cone in degree k and their classes.
    Eff {
        #[arg(default_value = "-")]
        file: String,
        #[arg(long)]
        k: usize,
    },
    /// Generator counts (r_k, v_k, t_k) for every k.
    Counts {
        #[arg(default_value = "-")]
        file: String,
    },
    /// Toric presentation of A_k for a fan file.
    Oracle {
        #[arg(default_value = "-")]
        fanfile: String,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Print a built-in example as an input document.
    Fixture {
        name: String,
        /// Print the toric fan of a downgrade fixture instead.
        #[arg(long)]
        fan: bool,
    },
    /// Compare the downgrade of a fan with its toric presentation in every degree.
    Crosscheck {
        #[arg(default_value = "-")]
        fanfile: String,
    },
}

/// Failures with their exit codes: 1 for invalid data, 2 for unreadable input.
enum Failure {
    Invalid(String),
    Parse(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Parse(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Invalid(m) | Failure::Parse(m) => m,
        }
    }
}

impl From<DocumentError> for Failure {
    fn from(e: DocumentError) -> Self {
        Failure::Parse(e.to_string())
    }
}

impl From<BuildError> for Failure {
    fn from(e: BuildError) -> Self {
        match e {
            BuildError::Malformed(_) | BuildError::UnknownFixture(_) => {
                Failure::Parse(e.to_string())
            }
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

impl From<ChowError> for Failure {
    fn from(e: ChowError) -> Self {
        match e {
            ChowError::KOutOfRange { .. } => Failure::Parse(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

impl From<FansyError> for Failure {
    fn from(e: FansyError) -> Self {
        match e {
            FansyError::KOutOfRange { .. } => Failure::Parse(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

/// What a command produced: the document, its table rendering, and whether it counts as success.
struct Outcome {
    doc: OutputDocument,
    table: String,
    ok: bool,
}

fn read_input(path: &str) -> Result<String, Failure> {
    let mut s = String::new();
    let res = if path == "-" {
        std::io::stdin().read_to_string(&mut s).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| s = t)
    };
    res.map_err(|e| Failure::Parse(format!("cannot read {path}: {e}")))?;
    Ok(s)
}

fn load_divisor(path: &str) -> Result<MarkedFansyDivisor, Failure> {
    let doc = InputDocument::from_json(&read_input(path)?)?;
    Ok(doc.build()?)
}

fn load_fan(path: &str) -> Result<FanFile, Failure> {
    Ok(FanFile::from_json(&read_input(path)?)?)
}

fn summary_table(ps: &[ChowPresentation]) -> String {
    let mut t = String::from(" k   r   v   t  A_k\n");
    for p in ps {
        let (r, v, c) = p.counts();
        let _ = writeln!(t, "{:>2} {:>3} {:>3} {:>3}  {}", p.k, r, v, c, p.smith);
    }
    t
}

fn detail_table(p: &ChowPresentation) -> String {
    let mut t = summary_table(std::slice::from_ref(p));
    let _ = writeln!(t, "relations: {}", p.relations.rows());
    for (g, c) in p.generators.iter().zip(&p.class_map) {
        let free: Vec<String> = c.free.iter().map(|x| x.to_string()).collect();
        let tors: Vec<String> = c.torsion.iter().map(|x| x.to_string()).collect();
        let _ = write!(t, "  {g}  ->  ({})", free.join(", "));
        if !tors.is_empty() {
            let _ = write!(t, " + torsion ({})", tors.join(", "));
        }
        t.push('\n');
    }
    t
}

fn validate(file: &str) -> Result<Outcome, Failure> {
    let x = load_divisor(file)?;
    let report = x.validate();
    let mut doc = OutputDocument::new("validate");
    doc.validation = Some(report.into());
    let table = if report.is_valid() {
        "valid\n".to_string()
    } else {
        format!("invalid: {} violations\n{report}", report.violations.len())
    };
    Ok(Outcome {
        doc,
        table,
        ok: report.is_valid(),
    })
}

fn chow(file: &str, k: Option<usize>) -> Result<Outcome, Failure> {
    let x = load_divisor(file)?;
    x.ensure_valid()?;
    let ps = match k {
        Some(k) => vec![presentation(&x, k)?],
        None => all_presentations(&x)?,
    };
    let mut doc = OutputDocument::new("chow");
    doc.degrees = ps.iter().map(DegreeDoc::from_presentation).collect();
    let table = match k {
        Some(_) => detail_table(&ps[0]),
        None => summary_table(&ps),
    };
    Ok(Outcome {
        doc,
        table,
        ok: true,
    })
}

fn eff(file: &str, k: usize) -> Result<Outcome, Failure> {
    let x = load_divisor(file)?;
    x.ensure_valid()?;
    let p = presentation(&x, k)?;
    let report = EffConeReport::from_presentation(&p);
    let mut doc = OutputDocument::new("eff");
    let mut degree = DegreeDoc::from_presentation(&p);
    degree.eff = Some(EffDoc::from(&report));
    doc.degrees.push(degree);
    let mut table = format!(
        "k = {k}: {} generators, {} distinct classes in A_{k} = {}\n",
        report.generators.len(),
        report.distinct.len(),
        p.smith
    );
    for d in &report.distinct {
        let class: Vec<String> = d.class.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(table, "  ({})", class.join(", "));
        for &i in &d.members {
            let _ = writeln!(table, "      {}", report.generators[i]);
        }
    }
    Ok(Outcome {
        doc,
        table,
        ok: true,
    })
}

fn counts(file: &str) -> Result<Outcome, Failure> {
    let x = load_divisor(file)?;
    x.ensure_valid()?;
    let mut doc = OutputDocument::new("counts");
    let mut table = String::from(" k   r   v   t\n");
    for k in 0..=x.rank() + 1 {
        let c = x.enumerate_generators(k)?.counts();
        let _ = writeln!(table, "{k:>2} {:>3} {:>3} {:>3}", c.0, c.1, c.2);
        doc.degrees.push(DegreeDoc::from_counts(k, c));
    }
    Ok(Outcome {
        doc,
        table,
        ok: true,
    })
}

fn oracle(fanfile: &str, k: Option<usize>) -> Result<Outcome, Failure> {
    let fan = load_fan(fanfile)?.to_input()?.split_fan()?;
    let ks: Vec<usize> = match k {
        Some(k) => vec![k],
        None => (0..=fan.ambient()).collect(),
    };
    let ps = ks
        .into_iter()
        .map(|k| fulton_sturmfels(&fan, k))
        .collect::<Result<Vec<_>, _>>()?;
    let mut doc = OutputDocument::new("oracle");
    doc.degrees = ps.iter().map(DegreeDoc::from_presentation).collect();
    let table = match k {
        Some(_) => detail_table(&ps[0]),
        None => summary_table(&ps),
    };
    Ok(Outcome {
        doc,
        table,
        ok: true,
    })
}

fn crosscheck(fanfile: &str) -> Result<Outcome, Failure> {
    let input = load_fan(fanfile)?.to_input()?;
    let fan = input.split_fan()?;
    let x = downgrade(&input)?;
    x.ensure_valid()?;
    let mut doc = OutputDocument::new("crosscheck");
    let mut table = String::from(" k  pipeline  oracle  agree\n");
    let mut ok = true;
    for k in 0..=fan.ambient() {
        let a = presentation(&x, k)?.smith;
        let b = fulton_sturmfels(&fan, k)?.smith;
        let agree = a == b;
        ok &= agree;
        let _ = writeln!(
            table,
            "{k:>2}  {:>8}  {:>6}  {}",
            a.to_string(),
            b.to_string(),
            agree
        );
        doc.crosscheck.push(CrosscheckDoc {
            k,
            pipeline: (&a).into(),
            oracle: (&b).into(),
            agree,
        });
    }
    Ok(Outcome { doc, table, ok })
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Parse(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    if let Command::Fixture { name, fan } = &cli.command {
        let text = if *fan {
            let mut s = serde_json::to_string_pretty(&fixture_fan(name)?).expect("serializable");
            s.push('\n');
            s
        } else {
            let mut s = fixture_document(name)?.to_json();
            s.push('\n');
            s
        };
        emit(&text, cli.out.as_ref())?;
        return Ok(true);
    }
    let outcome = match &cli.command {
        Command::Validate { file } => validate(file)?,
        Command::Chow { file, k, .. } => chow(file, *k)?,
        Command::Eff { file, k } => eff(file, *k)?,
        Command::Counts { file } => counts(file)?,
        Command::Oracle { fanfile, k } => oracle(fanfile, *k)?,
        Command::Crosscheck { fanfile } => crosscheck(fanfile)?,
        Command::Fixture { .. } => unreachable!(),
    };
    let text = if cli.json {
        outcome.doc.to_json()
    } else {
        outcome.table
    };
    emit(&text, cli.out.as_ref())?;
    Ok(outcome.ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

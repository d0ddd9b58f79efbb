//! Implementations of the four subcommands.
//!
//! Each command prints one JSON report to stdout and returns the exit
//! code: 0 for success, 1 when a mathematical condition fails (the report
//! carries the witness), while input problems and exhausted retry budgets
//! surface as [`CliError`] and exit with 2 and 3 respectively.

use std::fs;
use std::path::Path;

use tropgrass_core::exact::rat;
use tropgrass_core::fixtures::example_5tree;
use tropgrass_core::metrics::DissimilarityMatrix;
use tropgrass_core::trees::{
    enumerate_shapes, format_newick, parse_newick, random_equidistant, random_tree,
};
use tropgrass_core::tropical::{phi_m, pluecker_3term_scan};
use tropgrass_core::verify::{
    build_conj3_matrix, conjecture3_numeric, conjecture3_symbolic, end_to_end_theorem5,
    generic_heights, leading_coeff_formula_check, remark_n_counterexample,
    CoefficientAssignment, SubtreeType,
};
use tropgrass_core::{MVector, Rational, TreeError, WeightedTree};

use crate::error::{line_column, CliError};
use crate::report::{
    emit, subset_key, CheckReport, Conj3NumericReport, Conj3SymbolicReport, ExampleM5Report,
    FormulaReport, GenTreeReport, PhiReport, RemarkNReport, RunConfig, SymbolicShapeEntry,
    Thm5Report,
};
use crate::{CheckArgs, GenTreeArgs, PhiArgs, VerifyArgs};

/// Height assignments for symbolic runs: two multiplicatively unrelated
/// bases, so agreement between them is strong evidence that the result
/// does not depend on the choice of generic heights.
const HEIGHT_BASE: u32 = 8;
const ALTERNATE_HEIGHT_BASE: u32 = 11;

pub fn gen_tree(args: &GenTreeArgs) -> Result<u8, CliError> {
    let tree = if args.equidistant {
        random_equidistant(args.n, args.seed)?.tree().clone()
    } else {
        let lengths: Vec<Rational> = (1..=i64::from(args.max_length)).map(rat).collect();
        random_tree(args.n, args.seed, &lengths)?
    };
    let newick = format_newick(&tree);
    fs::write(&args.output, format!("{newick}\n")).map_err(|e| CliError::io(&args.output, e))?;

    emit(&GenTreeReport {
        config: RunConfig {
            command: "gen-tree",
            output: Some(args.output.display().to_string()),
            n: Some(args.n),
            seed: Some(args.seed),
            max_length: (!args.equidistant).then_some(args.max_length),
            equidistant: Some(args.equidistant),
            ..RunConfig::default()
        },
        digest: tree.digest(),
        newick,
    });
    Ok(0)
}

pub fn phi(args: &PhiArgs) -> Result<u8, CliError> {
    let tree = read_tree(&args.tree)?;
    let n = tree.n_leaves();
    if args.m < 2 || args.m > n {
        return Err(CliError::Usage(format!(
            "m must satisfy 2 <= m <= n = {n}, got {}",
            args.m
        )));
    }
    let vector = MVector::of_tree(&tree, args.m)?;
    if let Some(path) = &args.output {
        let json = serde_json::to_string_pretty(&vector)
            .expect("m-vectors serialize without error");
        fs::write(path, format!("{json}\n")).map_err(|e| CliError::io(path, e))?;
    }

    emit(&PhiReport {
        config: RunConfig {
            command: "phi",
            input: Some(args.tree.display().to_string()),
            output: args.output.as_ref().map(|p| p.display().to_string()),
            m: Some(args.m),
            ..RunConfig::default()
        },
        n,
        m: args.m,
        values: vector
            .iter()
            .map(|(subset, value)| (subset_key(&subset), value.to_string()))
            .collect(),
    });
    Ok(0)
}

pub fn check(args: &CheckArgs) -> Result<u8, CliError> {
    let input = read_matrix_or_vector(&args.matrix)?;
    let mode = if args.four_point {
        "four-point"
    } else if args.ultrametric {
        "ultrametric"
    } else {
        "pluecker"
    };
    let config = RunConfig {
        command: "check",
        input: Some(args.matrix.display().to_string()),
        mode: Some(mode),
        m: args.pluecker,
        ..RunConfig::default()
    };

    let mut report = CheckReport {
        config,
        n: input.n(),
        pass: true,
        four_point: None,
        ultrametric: None,
        pluecker: None,
    };
    if args.four_point {
        report.four_point = input.into_matrix(&args.matrix)?.four_point_violation();
        report.pass = report.four_point.is_none();
    } else if args.ultrametric {
        let matrix = input.into_matrix(&args.matrix)?;
        report.ultrametric = matrix.ultrametric_violation(&matrix.all_labels());
        report.pass = report.ultrametric.is_none();
    } else {
        let m = args.pluecker.expect("clap guarantees one mode is set");
        report.pluecker = pluecker_3term_scan(&input.into_mvector(m, &args.matrix)?);
        report.pass = report.pluecker.is_none();
    }

    emit(&report);
    Ok(u8::from(!report.pass))
}

pub fn verify(args: &VerifyArgs) -> Result<u8, CliError> {
    if let Some(path) = &args.thm5 {
        verify_thm5(args, path)
    } else if let Some(m) = args.conj3 {
        if args.symbolic {
            verify_conj3_symbolic(m)
        } else {
            verify_conj3_numeric(args, m)
        }
    } else if args.example_m5 {
        verify_example_m5()
    } else if args.remark_n {
        verify_remark_n()
    } else {
        verify_formulas()
    }
}

fn verify_thm5(args: &VerifyArgs, path: &Path) -> Result<u8, CliError> {
    let tree = read_tree(path)?;
    let report = end_to_end_theorem5(&tree, args.seed, args.retries)?;
    let pass = report.pass;
    emit(&Thm5Report {
        config: RunConfig {
            command: "verify",
            input: Some(path.display().to_string()),
            mode: Some("thm5"),
            seed: Some(args.seed),
            retries: Some(args.retries),
            ..RunConfig::default()
        },
        report,
    });
    Ok(u8::from(!pass))
}

fn verify_conj3_symbolic(m: usize) -> Result<u8, CliError> {
    if m < 3 {
        return Err(CliError::Usage(format!(
            "--conj3 needs m >= 3, got {m}"
        )));
    }
    let shapes = enumerate_shapes(m)?;
    let mut entries = Vec::with_capacity(shapes.len());
    for shape in &shapes {
        let run = conjecture3_symbolic(shape, &generic_heights(m - 1, HEIGHT_BASE))?;
        let alternate =
            conjecture3_symbolic(shape, &generic_heights(m - 1, ALTERNATE_HEIGHT_BASE))?;
        let heights_agree =
            run.term_count == alternate.term_count && run.leading == alternate.leading;
        entries.push(SymbolicShapeEntry {
            run,
            alternate_base: ALTERNATE_HEIGHT_BASE,
            alternate_term_count: alternate.term_count,
            heights_agree,
        });
    }
    let mut term_counts: Vec<usize> = entries.iter().map(|e| e.run.term_count).collect();
    term_counts.sort_unstable_by(|a, b| b.cmp(a));
    let all_pass = entries.iter().all(|e| e.run.pass && e.heights_agree);

    emit(&Conj3SymbolicReport {
        config: RunConfig {
            command: "verify",
            mode: Some("conj3-symbolic"),
            m: Some(m),
            ..RunConfig::default()
        },
        shape_count: shapes.len(),
        shapes: entries,
        term_counts,
        all_pass,
    });
    Ok(u8::from(!all_pass))
}

fn verify_conj3_numeric(args: &VerifyArgs, m: usize) -> Result<u8, CliError> {
    if m < 3 {
        return Err(CliError::Usage(format!(
            "--conj3 needs m >= 3, got {m}"
        )));
    }
    let shapes = enumerate_shapes(m)?;
    let heights = generic_heights(m - 1, HEIGHT_BASE);
    let mut runs = Vec::with_capacity(shapes.len() * args.draws as usize);
    for shape in &shapes {
        for draw in 0..u64::from(args.draws) {
            let seed = args.seed.wrapping_add(draw);
            runs.push(conjecture3_numeric(shape, &heights, seed)?);
        }
    }
    let all_pass = runs.iter().all(|r| r.pass);

    emit(&Conj3NumericReport {
        config: RunConfig {
            command: "verify",
            mode: Some("conj3-numeric"),
            m: Some(m),
            seed: Some(args.seed),
            draws: Some(args.draws),
            ..RunConfig::default()
        },
        shape_count: shapes.len(),
        runs,
        all_pass,
    });
    Ok(u8::from(!all_pass))
}

fn verify_example_m5() -> Result<u8, CliError> {
    let tree = example_5tree();
    let witness = build_conj3_matrix(&tree, &CoefficientAssignment::example_primes(), 1)?;
    let det = witness.matrix().determinant().map_err(|e| {
        CliError::Verify(tropgrass_core::VerifyError::Exact(e))
    })?;
    let degree = det.degree();
    let leading = det.leading_coeff().and_then(|c| c.as_constant());
    let pass = degree == Some(rat(37)) && leading == Some(rat(3344));

    emit(&ExampleM5Report {
        config: RunConfig {
            command: "verify",
            mode: Some("example-m5"),
            ..RunConfig::default()
        },
        degree: degree.map(|d| d.to_string()),
        leading: leading.map(|c| c.to_string()),
        expected_degree: "37".into(),
        expected_leading: "3344".into(),
        pass,
    });
    Ok(u8::from(!pass))
}

fn verify_remark_n() -> Result<u8, CliError> {
    let record = remark_n_counterexample(&example_5tree(), &[1, 2, 3])?;
    let pass = record.counterexample_confirmed;
    emit(&RemarkNReport {
        config: RunConfig {
            command: "verify",
            mode: Some("remark-n"),
            ..RunConfig::default()
        },
        record,
        pass,
    });
    Ok(u8::from(!pass))
}

fn verify_formulas() -> Result<u8, CliError> {
    let checks = [SubtreeType::I, SubtreeType::II, SubtreeType::III]
        .into_iter()
        .map(leading_coeff_formula_check)
        .collect::<Result<Vec<_>, _>>()?;
    let pass = checks.iter().all(|c| c.formula_matches);
    emit(&FormulaReport {
        config: RunConfig {
            command: "verify",
            mode: Some("formulas"),
            ..RunConfig::default()
        },
        checks,
        pass,
    });
    Ok(u8::from(!pass))
}

/// Parses a Newick tree file, converting byte offsets in parse errors to
/// line and column numbers.
fn read_tree(path: &Path) -> Result<WeightedTree, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_newick(&text).map_err(|err| match err {
        TreeError::Newick { position, message } => {
            let (line, column) = line_column(&text, position);
            CliError::NewickAt {
                path: path.display().to_string(),
                line,
                column,
                message,
            }
        }
        other => CliError::Tree(other),
    })
}

/// Input to `check`: either a CSV matrix or an m-vector JSON file
/// (as written by `phi --output`), distinguished by the leading brace.
enum CheckInput {
    Matrix(DissimilarityMatrix),
    Vector(MVector),
}

impl CheckInput {
    fn n(&self) -> usize {
        match self {
            CheckInput::Matrix(d) => d.n(),
            CheckInput::Vector(v) => v.n(),
        }
    }

    /// Pairwise view for the four-point and ultrametric checks. A vector
    /// qualifies only when m = 2.
    fn into_matrix(self, path: &Path) -> Result<DissimilarityMatrix, CliError> {
        match self {
            CheckInput::Matrix(d) => Ok(d),
            CheckInput::Vector(v) if v.m() == 2 => Ok(v.to_matrix()?),
            CheckInput::Vector(v) => Err(CliError::Usage(format!(
                "{}: this check needs pairwise input (m = 2), the vector has m = {}",
                path.display(),
                v.m()
            ))),
        }
    }

    /// m-subset view for the Pluecker scan: pairwise input is lifted
    /// through the cyclic tour map, an m-vector is taken as-is.
    fn into_mvector(self, m: usize, path: &Path) -> Result<MVector, CliError> {
        if m < 2 {
            return Err(CliError::Usage(format!(
                "--pluecker needs m >= 2, got {m}"
            )));
        }
        let pairwise = match self {
            CheckInput::Matrix(d) => MVector::from_matrix(&d)?,
            CheckInput::Vector(v) if v.m() == m => return Ok(v),
            CheckInput::Vector(v) if v.m() == 2 => v,
            CheckInput::Vector(v) => {
                return Err(CliError::Usage(format!(
                    "{}: vector has m = {}, expected m = {m} or pairwise input",
                    path.display(),
                    v.m()
                )))
            }
        };
        if m == 2 {
            return Ok(pairwise);
        }
        Ok(phi_m(&pairwise, m)?)
    }
}

fn read_matrix_or_vector(path: &Path) -> Result<CheckInput, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    if text.trim_start().starts_with('{') {
        let vector: MVector =
            serde_json::from_str(&text).map_err(|err| CliError::BadVectorJson {
                path: path.display().to_string(),
                message: err.to_string(),
            })?;
        Ok(CheckInput::Vector(vector))
    } else {
        Ok(CheckInput::Matrix(DissimilarityMatrix::from_csv(&text)?))
    }
}

//! Command-line frontend: membership and symmetry checks, factorization
//! into simple elements, dressing, permutability, seeded random loops, and
//! small octonion/affine-algebra queries.
//!
//! Exit codes: 0 success, 1 validation failure, 2 algorithm failure
//! (internal guards), 3 parse error.

mod document;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use document::{emit, FactorsDoc, LoopDoc, SpecDoc, TwistDoc};
use ratloop::error::Error;
use ratloop::exact::scalar::Gq;
use ratloop::factorize::{factor_csp, factor_g2, factor_so, factor_twisted, verify_product};
use ratloop::linalg::matrix::basis_vec;
use ratloop::linalg::subspace::Subspace;
use ratloop::loops::{membership, symmetry_check, GroupKind};
use ratloop::octonion::{multiplier_plane, mul_im7};
use ratloop::sampling::{random_loop, random_twisted_loop, rng_from_seed};
use ratloop::affine::{theta_curvature, v_from_pqr, AbelianData, affine_bracket, is_flat};

#[derive(Parser)]
#[command(name = "ratloop", version, about = "exact rational loop group engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report membership, reality, normalization, and twisting of a loop.
    Check {
        input: PathBuf,
    },
    /// Factor a loop into simple (or twisted) factors.
    Factor {
        input: PathBuf,
        /// Include the per-step audit log in the output document.
        #[arg(long)]
        trace: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check that a factor document reconstructs a loop exactly.
    Verify {
        loop_file: PathBuf,
        factors_file: PathBuf,
    },
    /// Dress a loop by a simple factor: p h p'^-1 with moved data.
    Dress {
        factor_file: PathBuf,
        loop_file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Exchange two simple factors across their poles.
    Permute {
        first: PathBuf,
        second: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Generate a seeded random loop as a product of simple factors.
    Random {
        #[arg(long)]
        group: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        factors: usize,
        #[arg(long)]
        seed: u64,
        /// Twist flavor: grassmannian, unitary, g2so4, cspu.
        #[arg(long)]
        twist: Option<String>,
        /// Block size for the grassmannian flavor.
        #[arg(long)]
        twist_k: Option<usize>,
        #[arg(long, default_value_t = 2)]
        pole_pairs: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Octonion table and plane queries.
    Octa {
        #[command(subcommand)]
        query: OctaQuery,
    },
    /// Affine-algebra bracket and curvature queries.
    Affine {
        #[command(subcommand)]
        query: AffineQuery,
    },
}

#[derive(Subcommand)]
enum OctaQuery {
    /// Product of two imaginary basis units e_i * e_j (1-indexed).
    Table { i: usize, j: usize },
    /// The multiplier plane of an isotropic line, given by 7 scalars.
    Bplane {
        #[arg(long, value_delimiter = ',')]
        line: Vec<String>,
    },
}

#[derive(Subcommand)]
enum AffineQuery {
    /// Curvature of the constant-coefficient family at one parameter.
    Curvature {
        /// Nine scalars: p1,p2,p3,q1,q2,q3,r1,r2,r3.
        #[arg(long, value_delimiter = ',')]
        pqr: Vec<String>,
        #[arg(long, default_value = "1")]
        lambda: String,
    },
    /// Bracket of two coefficient elements.
    Bracket {
        #[arg(long, value_delimiter = ',')]
        pqr: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        pqr2: Vec<String>,
    },
}

fn exit_for(err: &Error) -> u8 {
    match err {
        Error::ParseError(_) => 3,
        Error::NonTermination
        | Error::LiouvilleResidual
        | Error::RankSurprise(_)
        | Error::NoSplittingLine
        | Error::ClosureViolation(_)
        | Error::FactorizationOverflow => 2,
        _ => 1,
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, Error> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::ParseError(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        Error::ParseError(format!(
            "{}: line {}, column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })
}

fn write_out(text: String, output: Option<&PathBuf>) -> Result<(), Error> {
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| Error::ParseError(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct CheckReport {
    member: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    multiplier: Option<document::RfDoc>,
    real: bool,
    normalized: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    twisted: Option<bool>,
    #[serde(skip_serializing_if = "String::is_empty")]
    detail: String,
}

fn run() -> Result<(), (Error, Option<String>)> {
    let cli = Cli::parse();
    match cli.command {
        Command::Check { input } => {
            let doc: LoopDoc = read_json(&input).map_err(|e| (e, None))?;
            let (g, ctx, twist) = doc.to_loop().map_err(|e| (e, None))?;
            let rep = membership(&g, &ctx);
            let sym = symmetry_check(&g, &ctx, twist.as_ref());
            let report = CheckReport {
                member: rep.member,
                multiplier: rep.multiplier.as_ref().map(document::RfDoc::from_rf),
                real: sym.real,
                normalized: sym.normalized,
                twisted: sym.twisted,
                detail: rep.detail.clone(),
            };
            let text = emit(&report);
            print!("{text}");
            let ok = rep.member
                && sym.real
                && sym.normalized
                && sym.twisted.unwrap_or(true);
            if ok {
                Ok(())
            } else {
                Err((
                    Error::NotAMember(if rep.detail.is_empty() {
                        "symmetry check failed".into()
                    } else {
                        rep.detail
                    }),
                    Some(String::new()),
                ))
            }
        }
        Command::Factor {
            input,
            trace,
            output,
        } => {
            let doc: LoopDoc = read_json(&input).map_err(|e| (e, None))?;
            let (g, ctx, twist) = doc.to_loop().map_err(|e| (e, None))?;
            let result = match &twist {
                Some(t) => factor_twisted(&g, t),
                None => match ctx.kind {
                    GroupKind::OrthogonalSo(_) => factor_so(&g),
                    GroupKind::ConformalSymplectic(_) => factor_csp(&g),
                    GroupKind::G2Fund => factor_g2(&g),
                    GroupKind::UnitaryGl(_) => Err(Error::SpecInvalid(
                        "no factorization driver for the unitary family".into(),
                    )),
                },
            }
            .map_err(|e| (e, None))?;
            let out = FactorsDoc::from_result(
                &result,
                ctx.kind,
                twist.map(|t| t.flavor),
                trace,
            );
            write_out(emit(&out), output.as_ref()).map_err(|e| (e, None))
        }
        Command::Verify {
            loop_file,
            factors_file,
        } => {
            let ldoc: LoopDoc = read_json(&loop_file).map_err(|e| (e, None))?;
            let (g, _, _) = ldoc.to_loop().map_err(|e| (e, None))?;
            let fdoc: FactorsDoc = read_json(&factors_file).map_err(|e| (e, None))?;
            let entries = fdoc.to_entries().map_err(|e| (e, None))?;
            let result = ratloop::factorize::FactorizationResult {
                factors: entries,
                steps: vec![],
            };
            if verify_product(&result, &g) {
                println!("product reconstructs the loop exactly");
                Ok(())
            } else {
                Err((
                    Error::NotAMember("product does not reconstruct the loop".into()),
                    None,
                ))
            }
        }
        Command::Dress {
            factor_file,
            loop_file,
            output,
        } => {
            let sdoc: SpecDoc = read_json(&factor_file).map_err(|e| (e, None))?;
            let ldoc: LoopDoc = read_json(&loop_file).map_err(|e| (e, None))?;
            let (h, ctx, _) = ldoc.to_loop().map_err(|e| (e, None))?;
            let spec = sdoc.to_spec(ctx.ambient()).map_err(|e| (e, None))?;
            let out = ratloop::dressing::dress(&spec, &h).map_err(|e| (e, None))?;
            #[derive(Serialize)]
            struct DressDoc {
                conjugated: LoopDoc,
                moved: SpecDoc,
            }
            let doc = DressDoc {
                conjugated: LoopDoc::from_loop(&out.conjugated, ctx.kind, None),
                moved: SpecDoc::from_spec(&out.right),
            };
            write_out(emit(&doc), output.as_ref()).map_err(|e| (e, None))
        }
        Command::Permute {
            first,
            second,
            output,
        } => {
            let d1: SpecDoc = read_json(&first).map_err(|e| (e, None))?;
            let d2: SpecDoc = read_json(&second).map_err(|e| (e, None))?;
            // infer ambient from whichever variant carries columns
            let ambient = infer_ambient(&d1).or_else(|| infer_ambient(&d2)).ok_or((
                Error::ParseError("cannot infer ambient dimension".into()),
                None,
            ))?;
            let p1 = d1.to_spec(ambient).map_err(|e| (e, None))?;
            let p2 = d2.to_spec(ambient).map_err(|e| (e, None))?;
            let (p2hat, p1hat) = ratloop::dressing::permute(&p1, &p2).map_err(|e| (e, None))?;
            #[derive(Serialize)]
            struct PermuteDoc {
                p2hat: SpecDoc,
                p1hat: SpecDoc,
            }
            let doc = PermuteDoc {
                p2hat: SpecDoc::from_spec(&p2hat),
                p1hat: SpecDoc::from_spec(&p1hat),
            };
            write_out(emit(&doc), output.as_ref()).map_err(|e| (e, None))
        }
        Command::Random {
            group,
            n,
            factors,
            seed,
            twist,
            twist_k,
            pole_pairs,
            output,
        } => {
            let kind = document::group_kind(&group, n).map_err(|e| (e, None))?;
            let mut rng = rng_from_seed(seed);
            let (g, flavor) = match twist {
                None => {
                    let (g, _) = random_loop(kind, factors, pole_pairs, &mut rng)
                        .map_err(|e| (e, None))?;
                    (g, None)
                }
                Some(name) => {
                    let tdoc = TwistDoc {
                        flavor: name,
                        k: twist_k,
                    };
                    let flavor = tdoc.to_flavor().map_err(|e| (e, None))?;
                    let g = random_twisted_loop(flavor, kind.ambient(), factors, &mut rng)
                        .map_err(|e| (e, None))?;
                    (g, Some(flavor))
                }
            };
            let doc = LoopDoc::from_loop(&g, kind, flavor);
            write_out(emit(&doc), output.as_ref()).map_err(|e| (e, None))
        }
        Command::Octa { query } => match query {
            OctaQuery::Table { i, j } => {
                if !(1..=7).contains(&i) || !(1..=7).contains(&j) {
                    return Err((
                        Error::ParseError("basis indices are 1..=7".into()),
                        None,
                    ));
                }
                let prod = mul_im7(&basis_vec(7, i - 1), &basis_vec(7, j - 1));
                let terms: Vec<String> = prod
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| format!("({}) e{}", c, k + 1))
                    .collect();
                let value = if terms.is_empty() {
                    // the scalar part is minus the inner product
                    if i == j {
                        "-1".to_string()
                    } else {
                        "0".to_string()
                    }
                } else {
                    terms.join(" + ")
                };
                println!("e{i} * e{j} = {value}");
                Ok(())
            }
            OctaQuery::Bplane { line } => {
                if line.len() != 7 {
                    return Err((
                        Error::ParseError("a line needs 7 scalars".into()),
                        None,
                    ));
                }
                let v: Vec<Gq> = line
                    .iter()
                    .map(|s| s.parse())
                    .collect::<Result<_, _>>()
                    .map_err(|e| (e, None))?;
                let plane = multiplier_plane(&Subspace::line(&v)).map_err(|e| (e, None))?;
                #[derive(Serialize)]
                struct PlaneDoc {
                    basis: Vec<Vec<String>>,
                }
                let doc = PlaneDoc {
                    basis: plane
                        .basis_vectors()
                        .iter()
                        .map(|b| b.iter().map(|c| c.to_string()).collect())
                        .collect(),
                };
                print!("{}", emit(&doc));
                Ok(())
            }
        },
        Command::Affine { query } => {
            let parse_pqr = |xs: &[String]| -> Result<AbelianData, Error> {
                if xs.len() != 9 {
                    return Err(Error::ParseError(
                        "expected nine scalars p1,p2,p3,q1,q2,q3,r1,r2,r3".into(),
                    ));
                }
                let v: Vec<Gq> = xs
                    .iter()
                    .map(|s| s.parse())
                    .collect::<Result<_, _>>()?;
                Ok(AbelianData {
                    p1: v[0].clone(),
                    p2: v[1].clone(),
                    p3: v[2].clone(),
                    q1: v[3].clone(),
                    q2: v[4].clone(),
                    q3: v[5].clone(),
                    r1: v[6].clone(),
                    r2: v[7].clone(),
                    r3: v[8].clone(),
                })
            };
            match query {
                AffineQuery::Curvature { pqr, lambda } => {
                    let data = parse_pqr(&pqr).map_err(|e| (e, None))?;
                    let lam: Gq = lambda.parse().map_err(|e| (e, None))?;
                    let v = v_from_pqr(&data);
                    let curv = theta_curvature(&v, &lam).map_err(|e| (e, None))?;
                    #[derive(Serialize)]
                    struct CurvatureDoc {
                        flat_family: bool,
                        curvature: Vec<Vec<String>>,
                    }
                    let m = curv.matrix();
                    let doc = CurvatureDoc {
                        flat_family: is_flat(&v).map_err(|e| (e, None))?,
                        curvature: (0..8)
                            .map(|r| (0..8).map(|c| m[(r, c)].to_string()).collect())
                            .collect(),
                    };
                    print!("{}", emit(&doc));
                    Ok(())
                }
                AffineQuery::Bracket { pqr, pqr2 } => {
                    let a = v_from_pqr(&parse_pqr(&pqr).map_err(|e| (e, None))?);
                    let b = v_from_pqr(&parse_pqr(&pqr2).map_err(|e| (e, None))?);
                    let br = affine_bracket(&a, &b).map_err(|e| (e, None))?;
                    #[derive(Serialize)]
                    struct BracketDoc {
                        bracket: Vec<Vec<String>>,
                    }
                    let m = br.matrix();
                    let doc = BracketDoc {
                        bracket: (0..8)
                            .map(|r| (0..8).map(|c| m[(r, c)].to_string()).collect())
                            .collect(),
                    };
                    print!("{}", emit(&doc));
                    Ok(())
                }
            }
        }
    }
}

fn infer_ambient(d: &SpecDoc) -> Option<usize> {
    if let Some(cols) = &d.subspace {
        return cols.first().map(|c| c.len());
    }
    if let Some(line) = &d.line {
        return Some(line.len());
    }
    if d.plane.is_some() || d.l.is_some() {
        return Some(7);
    }
    None
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err((err, quiet)) => {
            if quiet.is_none() {
                eprintln!("error: {err}");
            }
            ExitCode::from(exit_for(&err))
        }
    }
}

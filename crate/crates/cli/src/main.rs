//! Command-line front end for the linpoly library.
//!
//! Exit codes: 0 on success, 1 on domain errors (with a machine-readable
//! error object on stdout), 2 on malformed input or bad usage.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use linpoly::autogroup::{
    complete_coordinate, diagonalize_map, ideal_normal_form, invert_map, is_automorphism,
    is_coordinate, recognize_polynomial_ring, tame_decompose, univariate_factor, RingRecognition,
    TameFactor,
};
use linpoly::field::{Field, FieldSpec};
use linpoly::linearize::{linearize_map, linearize_matrix, min_poly};
use linpoly::linmap::{LinMap, LinPoly};
use linpoly::matq::{smith_normal_form, PolyMatrix};
use linpoly::polyring::UniPoly;
use linpoly::separated::{
    invert_nomixed, is_coordinate_nomixed, linearize_triangular, permute_sep_map, rat_string,
    triangularize_map, SepMap, SepPoly,
};
use linpoly::Error;

#[derive(Parser)]
#[command(name = "linmap", version, about = "Exact algebra for linearized polynomial maps")]
struct Cli {
    /// Field order q, or "p,r" for an explicit prime and extension degree
    #[arg(long, global = true)]
    field: Option<String>,

    /// Modulus polynomial in `a` for the field extension, e.g. "a^2+1"
    #[arg(long, global = true)]
    modulus: Option<String>,

    /// Number of variables (inferred from the input when omitted)
    #[arg(long, global = true)]
    nvars: Option<usize>,

    /// Order d for the finite-order subcommands
    #[arg(long, global = true)]
    order: Option<u64>,

    /// Seed for the randomized factorization steps
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    /// Emit JSON instead of plain text
    #[arg(long, global = true)]
    json: bool,

    /// Read the input from a file instead of the positional argument
    #[arg(long, global = true)]
    file: Option<PathBuf>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Matrix over F_q[t] encoding the map
    Jq {
        #[arg(allow_hyphen_values = true)]
        map: Option<String>,
    },
    /// Compose two maps (left then right)
    Compose {
        #[arg(allow_hyphen_values = true)]
        f: Option<String>,
        #[arg(allow_hyphen_values = true)]
        g: Option<String>,
    },
    /// Inverse of an invertible map
    Invert {
        #[arg(allow_hyphen_values = true)]
        map: Option<String>,
    },
    /// Is the map an automorphism?
    IsAuto {
        #[arg(allow_hyphen_values = true)]
        map: Option<String>,
    },
    /// Tame factorization of an automorphism
    Tame {
        #[arg(allow_hyphen_values = true)]
        map: Option<String>,
    },
    /// Diagonal form h1 ∘ f ∘ h2 with tame h1, h2
    Diagonalize {
        #[arg(allow_hyphen_values = true)]
        map: Option<String>,
    },
    /// Is the polynomial a coordinate of an automorphism?
    IsCoordinate {
        #[arg(allow_hyphen_values = true)]
        poly: Option<String>,
    },
    /// Complete a coordinate to an automorphism
    Complete {
        #[arg(allow_hyphen_values = true)]
        poly: Option<String>,
    },
    /// Write f as h ∘ g with h univariate and g a coordinate
    FactorUnivariate {
        #[arg(allow_hyphen_values = true)]
        poly: Option<String>,
    },
    /// Normal form of the ideal generated by linearized polynomials
    IdealNf {
        #[arg(allow_hyphen_values = true)]
        generators: Option<String>,
    },
    /// Is the quotient by the ideal a polynomial ring?
    RecognizeRing {
        #[arg(allow_hyphen_values = true)]
        generators: Option<String>,
    },
    /// Minimal polynomial of a finite-order matrix (requires --order)
    Minpoly {
        #[arg(allow_hyphen_values = true)]
        matrix: Option<String>,
    },
    /// Smith normal form of a matrix over F_q[t]
    Snf {
        #[arg(allow_hyphen_values = true)]
        matrix: Option<String>,
    },
    /// Conjugate a finite-order map or matrix to a constant one
    /// (requires --order)
    Linearize {
        #[arg(allow_hyphen_values = true)]
        input: Option<String>,
        /// Treat the input as a matrix over F_q[t] instead of a map
        #[arg(long)]
        matrix: bool,
    },
    /// Operations on maps without mixed terms over the rationals
    #[command(subcommand)]
    Sep(SepCmd),
}

#[derive(Subcommand)]
enum SepCmd {
    /// Permutation making a map with identity linear part unitriangular
    Triangularize {
        #[arg(allow_hyphen_values = true)]
        map: Option<String>,
    },
    /// Exact inverse of a map with constant Jacobian determinant
    Invert {
        #[arg(allow_hyphen_values = true)]
        map: Option<String>,
    },
    /// Conjugate a finite-order triangular map to its linear part
    /// (requires --order)
    Linearize {
        #[arg(allow_hyphen_values = true)]
        map: Option<String>,
    },
    /// Is the polynomial a coordinate?
    IsCoordinate {
        #[arg(allow_hyphen_values = true)]
        poly: Option<String>,
    },
    /// Classify a polynomial as mixed-term-free
    Classify {
        #[arg(allow_hyphen_values = true)]
        poly: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(output) => {
            println!("{output}");
            ExitCode::SUCCESS
        }
        Err(e) if e.is_parse() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            let payload = json!({
                "schema": 1,
                "error": { "kind": e.kind(), "message": e.to_string() },
            });
            println!("{payload}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<String, Error> {
    match &cli.cmd {
        Cmd::Jq { map } => {
            let (field, text) = field_and_input(cli, map)?;
            let m = parse_map(&field, &text, cli.nvars)?;
            let matrix = m.to_matrix();
            Ok(render(
                cli,
                json!({"schema": 1, "matrix": matrix.to_string()}),
                matrix.to_string(),
            ))
        }
        Cmd::Compose { f, g } => {
            let field = required_field(cli)?;
            let (ftext, gtext) = two_inputs(cli, f, g)?;
            let fm = parse_map(&field, &ftext, cli.nvars)?;
            let gm = parse_map(&field, &gtext, cli.nvars)?;
            let comp = fm.compose(&gm)?;
            Ok(render(
                cli,
                json!({"schema": 1, "map": comp.to_string()}),
                comp.to_string(),
            ))
        }
        Cmd::Invert { map } => {
            let (field, text) = field_and_input(cli, map)?;
            let m = parse_map(&field, &text, cli.nvars)?;
            let inv = invert_map(&m)?;
            Ok(render(
                cli,
                json!({"schema": 1, "map": inv.to_string()}),
                inv.to_string(),
            ))
        }
        Cmd::IsAuto { map } => {
            let (field, text) = field_and_input(cli, map)?;
            let m = parse_map(&field, &text, cli.nvars)?;
            let ans = is_automorphism(&m)?;
            Ok(render(cli, json!({"schema": 1, "result": ans}), ans.to_string()))
        }
        Cmd::Tame { map } => {
            let (field, text) = field_and_input(cli, map)?;
            let m = parse_map(&field, &text, cli.nvars)?;
            let factors = tame_decompose(&m)?;
            let jf: Vec<Value> = factors.iter().map(factor_json).collect();
            let text_out = if factors.is_empty() {
                "identity".to_string()
            } else {
                factors.iter().map(factor_text).collect::<Vec<_>>().join("\n")
            };
            Ok(render(cli, json!({"schema": 1, "factors": jf}), text_out))
        }
        Cmd::Diagonalize { map } => {
            let (field, text) = field_and_input(cli, map)?;
            let m = parse_map(&field, &text, cli.nvars)?;
            let res = diagonalize_map(&m);
            let payload = json!({
                "schema": 1,
                "h1": res.h1.to_string(),
                "diagonal": res.diagonal.to_string(),
                "h2": res.h2.to_string(),
                "h1_factors": res.h1_factors.iter().map(factor_json).collect::<Vec<_>>(),
                "h2_factors": res.h2_factors.iter().map(factor_json).collect::<Vec<_>>(),
            });
            let text_out = format!("h1: {}\ndiagonal: {}\nh2: {}", res.h1, res.diagonal, res.h2);
            Ok(render(cli, payload, text_out))
        }
        Cmd::IsCoordinate { poly } => {
            let (field, text) = field_and_input(cli, poly)?;
            let p = parse_poly(&field, &text, cli.nvars)?;
            let ans = is_coordinate(&p);
            Ok(render(cli, json!({"schema": 1, "result": ans}), ans.to_string()))
        }
        Cmd::Complete { poly } => {
            let (field, text) = field_and_input(cli, poly)?;
            let p = parse_poly(&field, &text, cli.nvars)?;
            let c = complete_coordinate(&p)?;
            Ok(render(
                cli,
                json!({"schema": 1, "map": c.to_string()}),
                c.to_string(),
            ))
        }
        Cmd::FactorUnivariate { poly } => {
            let (field, text) = field_and_input(cli, poly)?;
            let p = parse_poly(&field, &text, cli.nvars)?;
            let (outer, coordinate) = univariate_factor(&p)?;
            let payload = json!({
                "schema": 1,
                "outer": outer.to_string(),
                "coordinate": coordinate.to_string(),
            });
            Ok(render(
                cli,
                payload,
                format!("outer: {outer}\ncoordinate: {coordinate}"),
            ))
        }
        Cmd::IdealNf { generators } => {
            let (field, text) = field_and_input(cli, generators)?;
            let gens = parse_polys(&field, &text, cli.nvars)?;
            let nf = ideal_normal_form(&gens)?;
            let payload = json!({
                "schema": 1,
                "automorphism": nf.automorphism.to_string(),
                "gs": nf.gs.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
            });
            let gs_text = nf
                .gs
                .iter()
                .map(|g| g.to_string())
                .collect::<Vec<_>>()
                .join("; ");
            Ok(render(
                cli,
                payload,
                format!("automorphism: {}\ngenerators: {}", nf.automorphism, gs_text),
            ))
        }
        Cmd::RecognizeRing { generators } => {
            let (field, text) = field_and_input(cli, generators)?;
            let gens = parse_polys(&field, &text, cli.nvars)?;
            match recognize_polynomial_ring(&gens)? {
                RingRecognition::PolynomialRing { dim, .. } => Ok(render(
                    cli,
                    json!({"schema": 1, "result": "polynomial_ring", "dim": dim}),
                    format!("polynomial ring in {dim} variable(s)"),
                )),
                RingRecognition::NotDomain {
                    witness_index,
                    witness,
                } => Ok(render(
                    cli,
                    json!({
                        "schema": 1,
                        "result": "not_domain",
                        "witness_index": witness_index,
                        "witness": witness.gs[witness_index].to_string(),
                    }),
                    format!(
                        "not a domain: generator {} has positive degree",
                        witness.gs[witness_index]
                    ),
                )),
            }
        }
        Cmd::Minpoly { matrix } => {
            let (field, text) = field_and_input(cli, matrix)?;
            let m = PolyMatrix::parse(&field, &text)?;
            let d = required_order(cli)?;
            let f = min_poly(&m, d)?;
            let s = f.display_with_var("X").to_string();
            Ok(render(cli, json!({"schema": 1, "minpoly": s}), s))
        }
        Cmd::Snf { matrix } => {
            let (field, text) = field_and_input(cli, matrix)?;
            let m = PolyMatrix::parse(&field, &text)?;
            let snf = smith_normal_form(&m);
            let payload = json!({
                "schema": 1,
                "left": snf.left.to_string(),
                "diag": snf.diag.to_string(),
                "right": snf.right.to_string(),
                "rank": snf.rank(),
            });
            Ok(render(
                cli,
                payload,
                format!("left: {}\ndiag: {}\nright: {}", snf.left, snf.diag, snf.right),
            ))
        }
        Cmd::Linearize { input, matrix } => {
            let (field, text) = field_and_input(cli, input)?;
            let d = required_order(cli)?;
            // the certificate is always emitted as JSON
            if *matrix {
                let m = PolyMatrix::parse(&field, &text)?;
                let cert = linearize_matrix(&m, d, cli.seed)?;
                Ok(json!({
                    "schema": 1,
                    "conjugator": cert.conjugator.to_string(),
                    "constant": cert.constant.to_string(),
                    "order": cert.order,
                })
                .to_string())
            } else {
                let m = parse_map(&field, &text, cli.nvars)?;
                let (g, part) = linearize_map(&m, d, cli.seed)?;
                Ok(json!({
                    "schema": 1,
                    "conjugator": g.to_string(),
                    "linear_part": part.to_string(),
                    "order": d,
                })
                .to_string())
            }
        }
        Cmd::Sep(sep) => run_sep(cli, sep),
    }
}

fn run_sep(cli: &Cli, sep: &SepCmd) -> Result<String, Error> {
    match sep {
        SepCmd::Triangularize { map } => {
            let text = input_text(cli, map)?;
            let m = SepMap::parse(&text, cli.nvars)?;
            let perm = triangularize_map(&m)?;
            let conj = permute_sep_map(&m, &perm);
            let display: Vec<usize> = perm.iter().map(|&i| i + 1).collect();
            let payload = json!({
                "schema": 1,
                "permutation": display,
                "conjugated": conj.to_string(),
            });
            let text_out = format!(
                "permutation: {}\nconjugated: {}",
                display
                    .iter()
                    .map(|i| i.to_string())
                    .collect::<Vec<_>>()
                    .join(" "),
                conj
            );
            Ok(render(cli, payload, text_out))
        }
        SepCmd::Invert { map } => {
            let text = input_text(cli, map)?;
            let m = SepMap::parse(&text, cli.nvars)?;
            let inv = invert_nomixed(&m)?;
            Ok(render(
                cli,
                json!({"schema": 1, "map": inv.to_string()}),
                inv.to_string(),
            ))
        }
        SepCmd::Linearize { map } => {
            let text = input_text(cli, map)?;
            let m = SepMap::parse(&text, cli.nvars)?;
            let d = required_order(cli)?;
            let (h, diag) = linearize_triangular(&m, d)?;
            let diag_s: Vec<String> = diag.iter().map(rat_string).collect();
            let payload = json!({
                "schema": 1,
                "conjugator": h.to_string(),
                "diagonal": diag_s,
            });
            Ok(render(
                cli,
                payload,
                format!("conjugator: {h}\ndiagonal: {}", diag_s.join(", ")),
            ))
        }
        SepCmd::IsCoordinate { poly } => {
            let text = input_text(cli, poly)?;
            let p = SepPoly::parse(&text, cli.nvars)?;
            let ans = is_coordinate_nomixed(&p);
            Ok(render(cli, json!({"schema": 1, "result": ans}), ans.to_string()))
        }
        SepCmd::Classify { poly } => {
            let text = input_text(cli, poly)?;
            let p = SepPoly::parse(&text, cli.nvars)?;
            let canonical = p.to_multi().to_string();
            Ok(render(
                cli,
                json!({"schema": 1, "separated": canonical}),
                canonical,
            ))
        }
    }
}

// ---------------------------------------------------------------------------
// Input plumbing

fn input_text(cli: &Cli, arg: &Option<String>) -> Result<String, Error> {
    if let Some(path) = &cli.file {
        return std::fs::read_to_string(path)
            .map(|s| s.trim().to_string())
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())));
    }
    arg.clone()
        .ok_or_else(|| Error::Parse("missing input (pass it as an argument or via --file)".into()))
}

fn two_inputs(
    cli: &Cli,
    f: &Option<String>,
    g: &Option<String>,
) -> Result<(String, String), Error> {
    if let Some(path) = &cli.file {
        let content = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
        let mut lines = content.lines().filter(|l| !l.trim().is_empty());
        let a = lines
            .next()
            .ok_or_else(|| Error::Parse("expected two maps in the file".into()))?;
        let b = lines
            .next()
            .ok_or_else(|| Error::Parse("expected two maps in the file".into()))?;
        return Ok((a.to_string(), b.to_string()));
    }
    match (f, g) {
        (Some(a), Some(b)) => Ok((a.clone(), b.clone())),
        _ => Err(Error::Parse("compose needs two maps".into())),
    }
}

fn required_field(cli: &Cli) -> Result<Field, Error> {
    let spec = cli
        .field
        .as_ref()
        .ok_or_else(|| Error::Parse("missing --field".into()))?;
    let (p, r) = if let Some((ps, rs)) = spec.split_once(',') {
        let p: u64 = ps
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad field spec '{spec}'")))?;
        let r: usize = rs
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad field spec '{spec}'")))?;
        (p, r)
    } else {
        let q: u64 = spec
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad field spec '{spec}'")))?;
        linpoly::field::split_prime_power(q)
            .ok_or_else(|| Error::Parse(format!("{q} is not a prime power")))?
    };
    let modulus = match &cli.modulus {
        None => None,
        Some(text) => {
            let prime = FieldSpec::prime(p)?;
            let poly = UniPoly::parse_with_var(&prime, text, "a")?;
            Some(
                poly.coeffs()
                    .iter()
                    .map(|c| c.coeffs()[0])
                    .collect::<Vec<u64>>(),
            )
        }
    };
    FieldSpec::new(p, r, modulus)
}

fn field_and_input(cli: &Cli, arg: &Option<String>) -> Result<(Field, String), Error> {
    Ok((required_field(cli)?, input_text(cli, arg)?))
}

fn required_order(cli: &Cli) -> Result<u64, Error> {
    cli.order.ok_or_else(|| Error::Parse("missing --order".into()))
}

/// Largest variable index mentioned in a map or polynomial text, so that
/// --nvars can be omitted.
fn infer_nvars(text: &str) -> usize {
    let bytes: Vec<char> = text.chars().collect();
    let mut max = 1usize;
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_alphabetic() {
            let start = i;
            i += 1;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let name: String = bytes[start..i].iter().collect();
            let idx = match name.as_str() {
                "Y" => Some(2),
                "Z" => Some(3),
                _ => name.strip_prefix('X').and_then(|d| d.parse::<usize>().ok()),
            };
            if let Some(k) = idx {
                max = max.max(k);
            }
        } else {
            i += 1;
        }
    }
    max
}

fn parse_map(field: &Field, text: &str, nvars: Option<usize>) -> Result<LinMap, Error> {
    let n = nvars.unwrap_or_else(|| infer_nvars(text));
    LinMap::parse(field, text, n)
}

fn parse_poly(field: &Field, text: &str, nvars: Option<usize>) -> Result<LinPoly, Error> {
    let n = nvars.unwrap_or_else(|| infer_nvars(text));
    LinPoly::parse(field, text, n)
}

fn parse_polys(field: &Field, text: &str, nvars: Option<usize>) -> Result<Vec<LinPoly>, Error> {
    let n = nvars.unwrap_or_else(|| infer_nvars(text));
    text.split(';')
        .map(|part| LinPoly::parse(field, part, n))
        .collect()
}

// ---------------------------------------------------------------------------
// Output rendering

fn render(cli: &Cli, payload: Value, text: String) -> String {
    if cli.json {
        payload.to_string()
    } else {
        text
    }
}

fn factor_json(f: &TameFactor) -> Value {
    match f {
        TameFactor::Elementary { index, shift } => json!({
            "kind": "elementary",
            "i": index + 1,
            "poly": shift.to_string(),
        }),
        TameFactor::Linear(c) => json!({
            "kind": "linear",
            "matrix": c.to_string(),
        }),
    }
}

fn factor_text(f: &TameFactor) -> String {
    match f {
        TameFactor::Elementary { index, shift } => {
            format!("elementary i={} poly={}", index + 1, shift)
        }
        TameFactor::Linear(c) => format!("linear matrix={c}"),
    }
}

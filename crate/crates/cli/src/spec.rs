//! Compact command-line notations for matrices, domains, seeds and complex numbers.

use crouzeix_core::generate::{ginibre, jordan, nilpotent2, normal, rng_for};
use crouzeix_core::geom::DomainSpec;
use crouzeix_core::{Error, Matrix, Result, C64};
use serde::Serialize;

/// `3`, `-0.5`, `2i`, `0.3-1.2i`, `i`.
pub fn parse_complex(text: &str) -> Result<C64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Input(format!("not a complex number: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|re| C64::new(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => x.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(C64::new(re.parse::<f64>().map_err(|_| bad())?, im))
}

fn split_spec(text: &str) -> (&str, Vec<&str>) {
    match text.split_once(':') {
        Some((k, rest)) => (k.trim(), rest.split(',').map(str::trim).collect()),
        None => (text.trim(), vec![]),
    }
}

fn real(s: &str, what: &str) -> Result<f64> {
    s.parse().map_err(|_| Error::Input(format!("{what}: not a number: {s:?}")))
}

fn count(s: &str, what: &str) -> Result<usize> {
    s.parse().map_err(|_| Error::Input(format!("{what}: not a size: {s:?}")))
}

/// Matrix generator notation.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Generator {
    /// `ginibre:n`
    Ginibre { n: usize },
    /// `jordan:n,λ`
    Jordan { n: usize, lambda: [f64; 2] },
    /// `nilpotent2:a`
    Nilpotent2 { a: [f64; 2] },
    /// `normal:λ1,λ2,...` (diagonal in a Haar-random basis)
    Normal { spectrum: Vec<[f64; 2]> },
    /// `skew`: the non-orthogonal idempotent pair
    Skew,
    /// `resolution:n,k`: random orthogonal resolution of the identity
    Resolution { n: usize, k: usize },
}

fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

impl Generator {
    pub fn parse(text: &str) -> Result<Self> {
        let (kind, args) = split_spec(text);
        let arity = |k: usize| {
            if args.len() == k {
                Ok(())
            } else {
                Err(Error::Input(format!("generator {kind} takes {k} argument(s): {text:?}")))
            }
        };
        match kind {
            "ginibre" => {
                arity(1)?;
                Ok(Generator::Ginibre { n: count(args[0], "ginibre")? })
            }
            "jordan" => {
                arity(2)?;
                Ok(Generator::Jordan {
                    n: count(args[0], "jordan")?,
                    lambda: pair(parse_complex(args[1])?),
                })
            }
            "nilpotent2" => {
                arity(1)?;
                Ok(Generator::Nilpotent2 { a: pair(parse_complex(args[0])?) })
            }
            "normal" if !args.is_empty() => Ok(Generator::Normal {
                spectrum: args.iter().map(|a| parse_complex(a).map(pair)).collect::<Result<_>>()?,
            }),
            "skew" => {
                arity(0)?;
                Ok(Generator::Skew)
            }
            "resolution" => {
                arity(2)?;
                Ok(Generator::Resolution {
                    n: count(args[0], "resolution")?,
                    k: count(args[1], "resolution")?,
                })
            }
            _ => Err(Error::Input(format!("unknown generator {text:?}"))),
        }
    }

    pub fn matrix(&self, seed: u64) -> Result<Matrix> {
        let c = |p: [f64; 2]| C64::new(p[0], p[1]);
        let mut rng = rng_for(seed, 0x6d);
        match self {
            Generator::Ginibre { n } => ginibre(*n, &mut rng),
            Generator::Jordan { n, lambda } => jordan(*n, c(*lambda)),
            Generator::Nilpotent2 { a } => Ok(nilpotent2(c(*a))),
            Generator::Normal { spectrum } => {
                let s: Vec<C64> = spectrum.iter().map(|p| c(*p)).collect();
                normal(&s, Some(&mut rng))
            }
            Generator::Skew | Generator::Resolution { .. } => Err(Error::Input(
                "idempotent generators only apply to the projection experiment".into(),
            )),
        }
    }
}

/// `disk:C,R`, `ellipse:C,A,B[,ROT]`, `range:MARGIN[,NODES]`, or the JSON form.
pub fn parse_domain(text: &str) -> Result<DomainSpec> {
    if text.trim_start().starts_with('{') {
        return DomainSpec::parse(text);
    }
    let (kind, args) = split_spec(text);
    let bad = || Error::Input(format!("malformed domain spec {text:?}"));
    match (kind, args.len()) {
        ("disk", 2) => Ok(DomainSpec::Disk {
            center: pair(parse_complex(args[0])?),
            radius: real(args[1], "disk radius")?,
        }),
        ("ellipse", 3 | 4) => Ok(DomainSpec::Ellipse {
            center: pair(parse_complex(args[0])?),
            a: real(args[1], "ellipse axis")?,
            b: real(args[2], "ellipse axis")?,
            rot: args.get(3).map(|r| real(r, "ellipse rotation")).transpose()?.unwrap_or(0.0),
        }),
        ("range", 1 | 2) => Ok(DomainSpec::Range {
            margin: real(args[0], "range margin")?,
            nodes: args.get(1).map(|n| count(n, "range nodes")).transpose()?.unwrap_or(256),
        }),
        _ => Err(bad()),
    }
}

/// `a..b` (inclusive), `a..=b`, `a..<b`, or a comma list.
pub fn parse_seeds(text: &str) -> Result<Vec<u64>> {
    let bad = || Error::Input(format!("malformed seed range {text:?}"));
    let num = |s: &str| s.trim().parse::<u64>().map_err(|_| bad());
    let seeds: Vec<u64> = if let Some((a, b)) = text.split_once("..") {
        let (b, exclusive) = if let Some(b) = b.strip_prefix('=') {
            (b, false)
        } else if let Some(b) = b.strip_prefix('<') {
            (b, true)
        } else {
            (b, false)
        };
        let (a, b) = (num(a)?, num(b)?);
        if exclusive {
            (a..b).collect()
        } else {
            (a..=b).collect()
        }
    } else {
        text.split(',').map(num).collect::<Result<_>>()?
    };
    if seeds.is_empty() {
        return Err(Error::Input(format!("seed range {text:?} is empty")));
    }
    Ok(seeds)
}

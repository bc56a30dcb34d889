//! Built-in objects and maps, so the common examples need no input files.

use cpstar_core::cp::{depolarizing, stochastic_channel, transpose_map, CPStarMorphism};
use cpstar_core::rel::{groupoid_to_algebra, Groupoid};
use cpstar_core::FrobeniusAlgebra;
use nalgebra::DMatrix;

use crate::document::AnyAlgebra;
use crate::CliError;

fn split(name: &str) -> (&str, Option<&str>) {
    match name.split_once(':') {
        Some((head, args)) => (head, Some(args)),
        None => (name, None),
    }
}

fn parse<T: std::str::FromStr>(s: &str, what: &str) -> Result<T, CliError> {
    s.trim().parse().map_err(|_| CliError::invalid(format!("bad {what} `{s}`")))
}

fn size(args: Option<&str>, name: &str) -> Result<usize, CliError> {
    let n: usize = parse(args.ok_or_else(|| CliError::invalid(format!("preset `{name}` needs a size")))?, "size")?;
    if n == 0 {
        return Err(CliError::invalid("sizes must be positive"));
    }
    Ok(n)
}

/// `z2`, `cyclic:k`, `discrete:n` or `indiscrete:n`.
pub fn groupoid(name: &str) -> Result<Option<Groupoid>, CliError> {
    let (head, args) = split(name);
    Ok(Some(match head {
        "z2" => Groupoid::cyclic(2),
        "cyclic" => Groupoid::cyclic(size(args, name)?),
        "discrete" => Groupoid::discrete(size(args, name)?),
        "indiscrete" => Groupoid::indiscrete(size(args, name)?),
        _ => return Ok(None),
    }))
}

/// Complex `pants:d`, `basis:d`, `direct-sum:n1,n2,..`, or the boolean
/// algebra of a groupoid preset.
pub fn algebra(name: &str) -> Result<Option<AnyAlgebra>, CliError> {
    let (head, args) = split(name);
    let a = match head {
        "pants" => FrobeniusAlgebra::pair_of_pants(size(args, name)?),
        "basis" => FrobeniusAlgebra::copying(size(args, name)?),
        "direct-sum" => {
            let list = args.ok_or_else(|| CliError::invalid("direct-sum needs a list of sizes"))?;
            let parts = list
                .split(',')
                .map(|s| size(Some(s), name).map(FrobeniusAlgebra::pair_of_pants))
                .collect::<Result<Vec<_>, _>>()?;
            FrobeniusAlgebra::direct_sum_all(&parts)?
        }
        _ => return Ok(groupoid(name)?.map(|g| AnyAlgebra::Boolean(groupoid_to_algebra(&g).expect("presets are groupoids")))),
    };
    Ok(Some(AnyAlgebra::Complex(a)))
}

/// `identity` (on `object`), `transpose[:n]`, `depolarizing:p[,n]` or
/// `stochastic:r11,r12;r21,r22` between copying algebras.
pub fn map(name: &str, object: Option<&str>, tol: f64) -> Result<CPStarMorphism, CliError> {
    let (head, args) = split(name);
    match head {
        "identity" => {
            let object = object.unwrap_or("pants:2");
            match algebra(object)? {
                Some(AnyAlgebra::Complex(a)) => Ok(CPStarMorphism::identity(&a)),
                _ => Err(CliError::invalid(format!("`{object}` is not a complex preset object"))),
            }
        }
        "transpose" => Ok(transpose_map(args.map(|s| size(Some(s), name)).transpose()?.unwrap_or(2))),
        "depolarizing" => {
            let args = args.ok_or_else(|| CliError::invalid("depolarizing needs a parameter"))?;
            let (p, n) = match args.split_once(',') {
                Some((p, n)) => (parse(p, "parameter")?, size(Some(n), name)?),
                None => (parse(args, "parameter")?, 2),
            };
            Ok(depolarizing(n, p))
        }
        "stochastic" => {
            let args = args.ok_or_else(|| CliError::invalid("stochastic needs a matrix"))?;
            let rows = args
                .split(';')
                .map(|r| r.split(',').map(|x| parse::<f64>(x, "entry")).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            let cols = rows[0].len();
            if rows.iter().any(|r| r.len() != cols) {
                return Err(CliError::invalid("stochastic rows have different lengths"));
            }
            let s = DMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j]);
            let (dom, cod) = (FrobeniusAlgebra::copying(cols), FrobeniusAlgebra::copying(rows.len()));
            Ok(stochastic_channel(&s, &dom, &cod, tol)?)
        }
        _ => Err(CliError::invalid(format!("unknown map preset `{name}`"))),
    }
}

use mckay_core::{CyclicAction, GroupAction, Quiver, ZetaVector};

use crate::{ActionArgs, CliError, CliResult, ZetaArgs};

pub fn quiver(args: &ActionArgs) -> CliResult<Quiver> {
    let factors = args
        .action
        .iter()
        .map(|a| CyclicAction::parse(a, args.allow_non_free))
        .collect::<Result<Vec<_>, _>>()?;
    let q = match factors.len() {
        1 => Quiver::mckay_cyclic(factors.into_iter().next().expect("one factor"))?,
        _ => Quiver::mckay_abelian(GroupAction::new(factors)?)?,
    };
    Ok(q)
}

fn parse_lines(text: &str) -> CliResult<Vec<ZetaVector>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| ZetaVector::parse(l).map_err(CliError::from))
        .collect()
}

/// Every ζ given on the command line or in the file, checked against the quiver.
pub fn zetas(q: &Quiver, args: &ZetaArgs) -> CliResult<Vec<ZetaVector>> {
    let mut out = Vec::new();
    if let Some(z) = &args.zeta {
        out.push(ZetaVector::parse(z)?);
    }
    if let Some(path) = &args.zeta_file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        out.extend(parse_lines(&text)?);
    }
    out.into_iter()
        .map(|z| {
            let z = z.for_quiver(q)?;
            if !z.is_generic() {
                eprintln!("warning: zeta {z} is not generic: a proper vertex subset sums to zero");
            }
            Ok(z)
        })
        .collect()
}

/// Exactly one ζ.
pub fn zeta(q: &Quiver, args: &ZetaArgs) -> CliResult<ZetaVector> {
    let mut all = zetas(q, args)?;
    match all.len() {
        0 => Err(CliError::Input(
            "a zeta is required (--zeta or --zeta-file)".into(),
        )),
        1 => Ok(all.remove(0)),
        n => Err(CliError::Input(format!("expected one zeta, got {n}"))),
    }
}

/// `LO..HI` with `LO <= HI`.
pub fn range(s: &str) -> CliResult<(i64, i64)> {
    let bad = || CliError::Input(format!("cannot parse range `{s}`; expected LO..HI"));
    let (lo, hi) = s.split_once("..").ok_or_else(bad)?;
    let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(range("-3..3").unwrap(), (-3, 3));
        assert!(range("3..-3").is_err());
        assert!(range("1,2").is_err());
    }

    #[test]
    fn zeta_lines_skip_comments() {
        let zs = parse_lines("# samples\n1,-1\n\n 2/3,-2/3\n").unwrap();
        assert_eq!(zs.len(), 2);
    }
}

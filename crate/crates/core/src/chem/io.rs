//! Plain-text integral files.
//!
//! ```text
//! [meta]
//! n_spatial = 2
//! ordering = chemist          # or physicist
//! units = hartree_bohr
//! [h]
//! 0 0 -1.2524
//! [g]
//! 0 0 0 0 0.6746
//! [dip_x]
//! 0 1 0.6944
//! [scalars]
//! e_nuc = 0.7199
//! d_nuc = 0 0 0
//! mo_energies = -0.5782 0.6703
//! occupation = 0
//! [cavity]
//! omega_hartree = 0.0735
//! lambda_x = 0.1
//! n_photon_max = 1
//! ```
//!
//! Matrix sections list `p q value`; entries not listed are zero and both
//! `(p, q)` and `(q, p)` may be given as long as they agree. `[g]` lists
//! `p q r s value` and is expanded over all eight permutational images;
//! conflicting images are rejected. Optional `[second_xx]` … `[second_yz]`
//! sections carry second-moment integrals. Values are written with
//! shortest round-trip formatting, so a save/load cycle is exact.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;

use super::integrals::{CavityParams, IntegralSet};
use crate::error::{Error, Result};

const DIP_SECTIONS: [&str; 3] = ["dip_x", "dip_y", "dip_z"];
const SECOND_SECTIONS: [&str; 6] =
    ["second_xx", "second_yy", "second_zz", "second_xy", "second_xz", "second_yz"];
const KNOWN: [&str; 14] = [
    "meta", "h", "g", "dip_x", "dip_y", "dip_z", "second_xx", "second_yy", "second_zz", "second_xy",
    "second_xz", "second_yz", "scalars", "cavity",
];

/// Serialize integrals and cavity parameters.
pub fn integrals_to_string(ints: &IntegralSet, cav: &CavityParams) -> String {
    let n = ints.n_spatial;
    let mut s = String::new();
    let _ = writeln!(s, "# cavity-vqe integral file\n[meta]\nn_spatial = {n}\nordering = chemist\nunits = hartree_bohr");
    let write_matrix = |s: &mut String, name: &str, m: &DMatrix<f64>| {
        let _ = writeln!(s, "[{name}]");
        for p in 0..n {
            for q in p..n {
                if m[(p, q)] != 0.0 {
                    let _ = writeln!(s, "{p} {q} {:?}", m[(p, q)]);
                }
            }
        }
    };
    write_matrix(&mut s, "h", &ints.h);
    let _ = writeln!(s, "[g]");
    for p in 0..n {
        for q in 0..=p {
            for r in 0..n {
                for t in 0..=r {
                    if p * (p + 1) / 2 + q < r * (r + 1) / 2 + t {
                        continue;
                    }
                    let v = ints.g_at(p, q, r, t);
                    if v != 0.0 {
                        let _ = writeln!(s, "{p} {q} {r} {t} {v:?}");
                    }
                }
            }
        }
    }
    for (k, name) in DIP_SECTIONS.iter().enumerate() {
        write_matrix(&mut s, name, &ints.dip[k]);
    }
    if let Some(sec) = &ints.second {
        for (k, name) in SECOND_SECTIONS.iter().enumerate() {
            write_matrix(&mut s, name, &sec[k]);
        }
    }
    let join = |v: &[f64]| v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(" ");
    let _ = writeln!(s, "[scalars]");
    let _ = writeln!(s, "e_nuc = {:?}", ints.e_nuc);
    let _ = writeln!(s, "d_nuc = {}", join(&ints.d_nuc));
    let _ = writeln!(s, "mo_energies = {}", join(&ints.mo_energies));
    let occ: Vec<String> = ints.occupied.iter().map(|i| i.to_string()).collect();
    let _ = writeln!(s, "occupation = {}", occ.join(" "));
    let _ = writeln!(s, "[cavity]");
    let _ = writeln!(s, "omega_hartree = {:?}", cav.omega);
    for (k, ax) in ["x", "y", "z"].iter().enumerate() {
        let _ = writeln!(s, "lambda_{ax} = {:?}", cav.lambda[k]);
    }
    let _ = writeln!(s, "n_photon_max = {}", cav.n_photon_max);
    s
}

pub fn save_integrals(path: impl AsRef<Path>, ints: &IntegralSet, cav: &CavityParams) -> Result<()> {
    std::fs::write(path, integrals_to_string(ints, cav))?;
    Ok(())
}

pub fn load_integrals(path: impl AsRef<Path>) -> Result<(IntegralSet, CavityParams)> {
    parse_integrals(&std::fs::read_to_string(path)?)
}

struct Line<'a> {
    no: usize,
    text: &'a str,
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn num<T: std::str::FromStr>(l: &Line, field: &str, what: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    field.parse::<T>().map_err(|e| perr(l.no, format!("{what}: {e} ({field:?})")))
}

fn key_values<'a>(lines: &'a [Line<'a>]) -> Result<HashMap<&'a str, (usize, &'a str)>> {
    let mut kv = HashMap::new();
    for l in lines {
        let (k, v) = l
            .text
            .split_once('=')
            .ok_or_else(|| perr(l.no, "expected `key = value`"))?;
        if kv.insert(k.trim(), (l.no, v.trim())).is_some() {
            return Err(perr(l.no, format!("duplicate key {}", k.trim())));
        }
    }
    Ok(kv)
}

fn fill_matrix(lines: &[Line], n: usize, name: &str) -> Result<DMatrix<f64>> {
    let mut m = DMatrix::zeros(n, n);
    let mut seen = vec![false; n * n];
    for l in lines {
        let f: Vec<&str> = l.text.split_whitespace().collect();
        if f.len() != 3 {
            return Err(perr(l.no, format!("[{name}] expects `p q value`")));
        }
        let p: usize = num(l, f[0], "index p")?;
        let q: usize = num(l, f[1], "index q")?;
        let v: f64 = num(l, f[2], "value")?;
        if p >= n || q >= n {
            return Err(perr(l.no, format!("[{name}] index out of range for n_spatial = {n}")));
        }
        for (a, b) in [(p, q), (q, p)] {
            if seen[a * n + b] && m[(a, b)] != v {
                return Err(perr(
                    l.no,
                    format!("[{name}] is not symmetric: ({a},{b}) = {} vs {v}", m[(a, b)]),
                ));
            }
            m[(a, b)] = v;
            seen[a * n + b] = true;
        }
    }
    Ok(m)
}

/// Parse the text format; see the module documentation.
pub fn parse_integrals(text: &str) -> Result<(IntegralSet, CavityParams)> {
    let mut sections: Vec<(String, usize, Vec<Line>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let t = raw.split('#').next().unwrap_or("").trim();
        if t.is_empty() {
            continue;
        }
        if let Some(name) = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let name = name.trim();
            if !KNOWN.contains(&name) {
                return Err(perr(no, format!("unknown section [{name}]")));
            }
            if sections.iter().any(|(s, _, _)| s == name) {
                return Err(perr(no, format!("duplicate section [{name}]")));
            }
            sections.push((name.to_string(), no, Vec::new()));
            continue;
        }
        match sections.last_mut() {
            Some((_, _, lines)) => lines.push(Line { no, text: t }),
            None => return Err(perr(no, "content before the first section")),
        }
    }
    let get = |name: &str| sections.iter().find(|(s, _, _)| s == name).map(|(_, _, l)| l.as_slice());
    let require = |name: &str| get(name).ok_or_else(|| perr(0, format!("missing section [{name}]")));

    let meta = key_values(require("meta")?)?;
    let (nl, nv) = meta.get("n_spatial").ok_or_else(|| perr(0, "missing meta key n_spatial"))?;
    let n: usize = nv.parse().map_err(|e| perr(*nl, format!("n_spatial: {e}")))?;
    if n == 0 || n > 16 {
        return Err(perr(*nl, format!("n_spatial = {n} is out of range")));
    }
    let physicist = match meta.get("ordering") {
        None => false,
        Some((_, "chemist")) => false,
        Some((_, "physicist")) => true,
        Some((l, other)) => return Err(perr(*l, format!("unknown ordering {other:?}"))),
    };
    if let Some((l, u)) = meta.get("units") {
        if *u != "hartree_bohr" {
            return Err(perr(*l, format!("unsupported units {u:?}")));
        }
    }

    let h = fill_matrix(require("h")?, n, "h")?;
    let mut g = vec![0.0; n.pow(4)];
    let mut seen = vec![false; n.pow(4)];
    for l in require("g")? {
        let f: Vec<&str> = l.text.split_whitespace().collect();
        if f.len() != 5 {
            return Err(perr(l.no, "[g] expects `p q r s value`"));
        }
        let mut ix = [0usize; 4];
        for k in 0..4 {
            ix[k] = num(l, f[k], "index")?;
            if ix[k] >= n {
                return Err(perr(l.no, "[g] index out of range"));
            }
        }
        let v: f64 = num(l, f[4], "value")?;
        // physicists' <pq|rs> = chemists' (pr|qs)
        let [p, q, r, s] = if physicist { [ix[0], ix[2], ix[1], ix[3]] } else { ix };
        for (a, b, c, d) in [
            (p, q, r, s),
            (q, p, r, s),
            (p, q, s, r),
            (q, p, s, r),
            (r, s, p, q),
            (s, r, p, q),
            (r, s, q, p),
            (s, r, q, p),
        ] {
            let k = ((a * n + b) * n + c) * n + d;
            if seen[k] && g[k] != v {
                return Err(perr(l.no, format!("[g] breaks permutational symmetry at ({a}{b}|{c}{d})")));
            }
            g[k] = v;
            seen[k] = true;
        }
    }
    let dip: [DMatrix<f64>; 3] = {
        let mut out: [DMatrix<f64>; 3] = std::array::from_fn(|_| DMatrix::zeros(n, n));
        for (k, name) in DIP_SECTIONS.iter().enumerate() {
            if let Some(lines) = get(name) {
                out[k] = fill_matrix(lines, n, name)?;
            }
        }
        out
    };
    let second = if SECOND_SECTIONS.iter().any(|s| get(s).is_some()) {
        let mut out: [DMatrix<f64>; 6] = std::array::from_fn(|_| DMatrix::zeros(n, n));
        for (k, name) in SECOND_SECTIONS.iter().enumerate() {
            out[k] = fill_matrix(require(name)?, n, name)?;
        }
        Some(out)
    } else {
        None
    };

    let scalars = key_values(require("scalars")?)?;
    let floats = |kv: &HashMap<&str, (usize, &str)>, key: &str| -> Result<Vec<f64>> {
        let (l, v) = kv.get(key).ok_or_else(|| perr(0, format!("missing key {key}")))?;
        v.split_whitespace()
            .map(|x| x.parse::<f64>().map_err(|e| perr(*l, format!("{key}: {e}"))))
            .collect()
    };
    let e_nuc = *floats(&scalars, "e_nuc")?.first().ok_or_else(|| perr(0, "e_nuc is empty"))?;
    let d_nuc_v = floats(&scalars, "d_nuc")?;
    if d_nuc_v.len() != 3 {
        return Err(perr(scalars["d_nuc"].0, "d_nuc needs three components"));
    }
    let mo_energies = floats(&scalars, "mo_energies")?;
    if mo_energies.len() != n {
        return Err(perr(scalars["mo_energies"].0, "mo_energies length differs from n_spatial"));
    }
    let (ol, ov) = scalars.get("occupation").ok_or_else(|| perr(0, "missing key occupation"))?;
    let occupied: Vec<usize> = ov
        .split_whitespace()
        .map(|x| x.parse::<usize>().map_err(|e| perr(*ol, format!("occupation: {e}"))))
        .collect::<Result<_>>()?;

    let cav_kv = key_values(require("cavity")?)?;
    let one = |key: &str, default: Option<f64>| -> Result<f64> {
        match cav_kv.get(key) {
            Some((l, v)) => v.parse::<f64>().map_err(|e| perr(*l, format!("{key}: {e}"))),
            None => default.ok_or_else(|| perr(0, format!("missing cavity key {key}"))),
        }
    };
    let omega = one("omega_hartree", None)?;
    let lambda = [one("lambda_x", Some(0.0))?, one("lambda_y", Some(0.0))?, one("lambda_z", Some(0.0))?];
    let n_photon_max = match cav_kv.get("n_photon_max") {
        Some((l, v)) => v.parse::<usize>().map_err(|e| perr(*l, format!("n_photon_max: {e}")))?,
        None => 1,
    };
    let cav = CavityParams::new(omega, lambda, n_photon_max)?;

    let ints = IntegralSet {
        n_spatial: n,
        h,
        g,
        dip,
        second,
        e_nuc,
        d_nuc: [d_nuc_v[0], d_nuc_v[1], d_nuc_v[2]],
        mo_energies,
        occupied,
    };
    ints.validate(1e-10)?;
    Ok((ints, cav))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chem::{compute_sto3g_h2, Geometry};

    #[test]
    fn round_trip_is_exact() {
        let ints = compute_sto3g_h2(&Geometry::h2(0.735).unwrap()).unwrap();
        let cav = CavityParams::from_ev(2.0, [0.1, 0.0, 0.0], 1).unwrap();
        let text = integrals_to_string(&ints, &cav);
        let (back, cav2) = parse_integrals(&text).unwrap();
        assert_eq!(cav, cav2);
        assert_eq!(back.h, ints.h);
        assert_eq!(back.dip, ints.dip);
        assert_eq!(back.second, ints.second);
        assert_eq!(back.e_nuc, ints.e_nuc);
        assert_eq!(back.mo_energies, ints.mo_energies);
        for (a, b) in back.g.iter().zip(&ints.g) {
            assert!((a - b).abs() <= 1e-14);
        }
    }

    const TOY: &str = "[meta]\nn_spatial = 1\n[h]\n0 0 -1.0\n[g]\n0 0 0 0 0.5\n[scalars]\ne_nuc = 0.2\nd_nuc = 0 0 0\nmo_energies = -0.5\noccupation = 0\n[cavity]\nomega_hartree = 0.1\n";

    #[test]
    fn toy_file_accepted() {
        let (ints, cav) = parse_integrals(TOY).unwrap();
        assert_eq!(ints.n_spatial, 1);
        assert_eq!(cav.n_photon_max, 1);
        // E = 2h + J + e_nuc
        assert!((ints.reference_energy() - (-2.0 + 0.5 + 0.2)).abs() < 1e-15);
    }

    #[test]
    fn asymmetric_h_rejected() {
        let bad = TOY.replace("[meta]\nn_spatial = 1", "[meta]\nn_spatial = 2").replace(
            "[h]\n0 0 -1.0\n",
            "[h]\n0 0 -1.0\n0 1 0.3\n1 0 0.2\n",
        );
        let err = parse_integrals(&bad).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 6, .. }), "{err}");
    }

    #[test]
    fn unknown_section_rejected() {
        let err = parse_integrals(&format!("{TOY}[extra]\n")).unwrap_err();
        assert!(err.to_string().contains("unknown section"));
    }

    #[test]
    fn bad_number_reports_line() {
        let err = parse_integrals(&TOY.replace("0 0 -1.0", "0 0 -1.0x")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }), "{err}");
    }

    #[test]
    fn physicist_order_is_converted() {
        let ints = compute_sto3g_h2(&Geometry::h2(1.0).unwrap()).unwrap();
        let cav = CavityParams::from_ev(2.0, [0.0; 3], 1).unwrap();
        let mut text = integrals_to_string(&ints, &cav).replace("ordering = chemist", "ordering = physicist");
        // rewrite the [g] block in physicists' order
        let start = text.find("[g]\n").unwrap() + 4;
        let end = text[start..].find('[').unwrap() + start;
        let mut block = String::new();
        for l in text[start..end].lines() {
            let f: Vec<&str> = l.split_whitespace().collect();
            block.push_str(&format!("{} {} {} {} {}\n", f[0], f[2], f[1], f[3], f[4]));
        }
        text.replace_range(start..end, &block);
        let (back, _) = parse_integrals(&text).unwrap();
        assert_eq!(back.g, ints.g);
    }
}

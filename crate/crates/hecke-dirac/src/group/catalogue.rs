//! Generator matrices and irreducible models for the supported groups.

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalar::Cyclo;

pub(crate) struct IrrepModel {
    pub label: String,
    pub gens: Vec<Mat>,
}

pub(crate) struct GroupData {
    pub id: String,
    pub n: usize,
    pub conductor: u32,
    pub gens: Vec<Mat>,
    /// Class names for reflection classes, keyed by a representative generator.
    pub reflection_class_names: Vec<(usize, String)>,
    pub irreps: Vec<IrrepModel>,
}

fn z(n: u32, e: i64) -> Cyclo {
    Cyclo::zeta(n, e)
}

fn diag(v: Vec<Cyclo>) -> Mat {
    let n = v.len();
    let mut m = Mat::zeros(n, n);
    for (i, x) in v.into_iter().enumerate() {
        m.set(i, i, x);
    }
    m
}

fn one_dim(label: &str, vals: &[i64]) -> IrrepModel {
    IrrepModel {
        label: label.to_string(),
        gens: vals.iter().map(|&v| Mat::from_ints(&[&[v]])).collect(),
    }
}

fn scaled(label: &str, base: &[Mat], signs: &[i64]) -> IrrepModel {
    IrrepModel {
        label: label.to_string(),
        gens: base
            .iter()
            .zip(signs)
            .map(|(m, &s)| m.scale(&Cyclo::from_int(s)))
            .collect(),
    }
}

/// Parse a catalogue id, accepting a few spellings (`I2(4)`, `I2_4`, `G(3,1,2)`).
pub(crate) fn lookup(id: &str) -> Result<GroupData> {
    let norm: String = id
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect::<String>()
        .to_ascii_uppercase();
    let unknown = || Error::UnknownGroup(id.to_string());
    match norm.as_str() {
        "A1" => return Ok(a1()),
        "A2" => return Ok(a2()),
        "B2" => return Ok(b2()),
        "B3" => return Ok(b3()),
        _ => {}
    }
    if let Some(rest) = norm.strip_prefix("I2") {
        let m: u32 = rest
            .trim_matches(|c| c == '(' || c == ')' || c == '_')
            .parse()
            .map_err(|_| unknown())?;
        if (2..=6).contains(&m) {
            return Ok(dihedral(m));
        }
        return Err(unknown());
    }
    if let Some(rest) = norm.strip_prefix('Z') {
        let m: u32 = rest.parse().map_err(|_| unknown())?;
        if (2..=6).contains(&m) {
            return Ok(cyclic(m));
        }
        return Err(unknown());
    }
    if let Some(rest) = norm.strip_prefix("G(").and_then(|r| r.strip_suffix(",1,2)")) {
        let m: u32 = rest.parse().map_err(|_| unknown())?;
        if (2..=4).contains(&m) {
            return Ok(imprimitive(m));
        }
    }
    Err(unknown())
}

pub const CATALOGUE: &[&str] = &[
    "A1", "A2", "B2", "B3", "I2(2)", "I2(3)", "I2(4)", "I2(5)", "I2(6)", "Z2", "Z3", "Z4", "Z5",
    "Z6", "G(2,1,2)", "G(3,1,2)", "G(4,1,2)",
];

fn a1() -> GroupData {
    GroupData {
        id: "A1".into(),
        n: 1,
        conductor: 1,
        gens: vec![Mat::from_ints(&[&[-1]])],
        reflection_class_names: vec![(0, "s".into())],
        irreps: vec![one_dim("triv", &[1]), one_dim("sgn", &[-1])],
    }
}

fn a2() -> GroupData {
    let s1 = Mat::from_ints(&[&[-1, 1], &[0, 1]]);
    let s2 = Mat::from_ints(&[&[1, 0], &[1, -1]]);
    GroupData {
        id: "A2".into(),
        n: 2,
        conductor: 1,
        gens: vec![s1.clone(), s2.clone()],
        reflection_class_names: vec![(0, "s".into())],
        irreps: vec![
            one_dim("triv", &[1, 1]),
            IrrepModel {
                label: "refl".into(),
                gens: vec![s1, s2],
            },
            one_dim("sgn", &[-1, -1]),
        ],
    }
}

fn b2() -> GroupData {
    // generator 0: short reflection diag(-1,1); generator 1: long reflection (swap)
    let t = Mat::from_ints(&[&[-1, 0], &[0, 1]]);
    let s = Mat::from_ints(&[&[0, 1], &[1, 0]]);
    GroupData {
        id: "B2".into(),
        n: 2,
        conductor: 1,
        gens: vec![t.clone(), s.clone()],
        reflection_class_names: vec![(0, "short".into()), (1, "long".into())],
        irreps: vec![
            one_dim("2x0", &[1, 1]),
            one_dim("11x0", &[1, -1]),
            IrrepModel {
                label: "1x1".into(),
                gens: vec![t, s],
            },
            one_dim("0x2", &[-1, 1]),
            one_dim("0x11", &[-1, -1]),
        ],
    }
}

fn b3() -> GroupData {
    let t = Mat::from_ints(&[&[-1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
    let s1 = Mat::from_ints(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]);
    let s2 = Mat::from_ints(&[&[1, 0, 0], &[0, 0, 1], &[0, 1, 0]]);
    let h = vec![t.clone(), s1.clone(), s2.clone()];
    let std_s1 = Mat::from_ints(&[&[-1, 1], &[0, 1]]);
    let std_s2 = Mat::from_ints(&[&[1, 0], &[1, -1]]);
    let i2 = Mat::identity(2);
    GroupData {
        id: "B3".into(),
        n: 3,
        conductor: 1,
        gens: h.clone(),
        reflection_class_names: vec![(0, "short".into()), (1, "long".into())],
        irreps: vec![
            one_dim("3x0", &[1, 1, 1]),
            one_dim("111x0", &[1, -1, -1]),
            one_dim("0x3", &[-1, 1, 1]),
            one_dim("0x111", &[-1, -1, -1]),
            IrrepModel {
                label: "21x0".into(),
                gens: vec![i2.clone(), std_s1.clone(), std_s2.clone()],
            },
            IrrepModel {
                label: "0x21".into(),
                gens: vec![i2.scale(&Cyclo::from_int(-1)), std_s1, std_s2],
            },
            scaled("2x1", &h, &[1, 1, 1]),
            scaled("1x2", &h, &[-1, 1, 1]),
            scaled("11x1", &h, &[1, -1, -1]),
            scaled("1x11", &h, &[-1, -1, -1]),
        ],
    }
}

/// Complex model: r = diag(ζ, ζ⁻¹), generators s = antidiag(1,1) and r·s.
fn dihedral(m: u32) -> GroupData {
    let anti = |a: Cyclo, b: Cyclo| {
        Mat::from_rows(vec![vec![Cyclo::zero(), a], vec![b, Cyclo::zero()]])
    };
    let s = anti(Cyclo::one(), Cyclo::one());
    let rs = |j: i64| anti(z(m, j), z(m, -j));
    let mut irreps = vec![one_dim("triv", &[1, 1]), one_dim("sgn", &[-1, -1])];
    if m.is_multiple_of(2) {
        irreps.push(one_dim("eps1", &[1, -1]));
        irreps.push(one_dim("eps2", &[-1, 1]));
    }
    for j in 1..=((m as i64 - 1) / 2) {
        irreps.push(IrrepModel {
            label: format!("rho{}", j),
            gens: vec![s.clone(), rs(j)],
        });
    }
    let classes = if m.is_multiple_of(2) {
        vec![(0, "s".into()), (1, "rs".into())]
    } else {
        vec![(0, "s".into())]
    };
    GroupData {
        id: format!("I2({})", m),
        n: 2,
        conductor: m,
        gens: vec![s, rs(1)],
        reflection_class_names: classes,
        irreps,
    }
}

fn cyclic(m: u32) -> GroupData {
    let irreps = (0..m as i64)
        .map(|j| IrrepModel {
            label: format!("chi{}", j),
            gens: vec![Mat::from_rows(vec![vec![z(m, j)]])],
        })
        .collect();
    GroupData {
        id: format!("Z{}", m),
        n: 1,
        conductor: m,
        gens: vec![Mat::from_rows(vec![vec![z(m, 1)]])],
        reflection_class_names: Vec::new(),
        irreps,
    }
}

/// G(m,1,2): generators t = diag(ζ, 1) and the swap.
fn imprimitive(m: u32) -> GroupData {
    let t = diag(vec![z(m, 1), Cyclo::one()]);
    let s = Mat::from_ints(&[&[0, 1], &[1, 0]]);
    let mut irreps = Vec::new();
    for j in 0..m as i64 {
        for (sign, tag) in [(1, "+"), (-1, "-")] {
            irreps.push(IrrepModel {
                label: format!("chi{}{}", j, tag),
                gens: vec![
                    Mat::from_rows(vec![vec![z(m, j)]]),
                    Mat::from_ints(&[&[sign]]),
                ],
            });
        }
    }
    for i in 0..m as i64 {
        for j in i + 1..m as i64 {
            irreps.push(IrrepModel {
                label: format!("rho{}{}", i, j),
                gens: vec![diag(vec![z(m, i), z(m, j)]), s.clone()],
            });
        }
    }
    GroupData {
        id: format!("G({},1,2)", m),
        n: 2,
        conductor: m,
        gens: vec![t, s],
        reflection_class_names: Vec::new(),
        irreps,
    }
}

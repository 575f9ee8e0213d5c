//! Built-in codes.
//!
//! `shor9` and `bacon-shor-9` are transcribed row for row from the standard
//! tables; `five-qubit` and `steane7` use the usual published generators and
//! are checked for parameters and distance whenever they are loaded by name.

use crate::code::{CodeError, PauliPair, SubsystemCode};
use crate::distance::{self, DistanceMethod};
use crate::pauli::PauliOp;

pub const NAMES: [&str; 4] = ["shor9", "bacon-shor-9", "five-qubit", "steane7"];

fn ops(rows: &[&str]) -> Vec<PauliOp> {
    rows.iter().map(|s| s.parse().expect("catalog row")).collect()
}

fn pair(x: &str, z: &str) -> PauliPair {
    PauliPair::new(x.parse().expect("catalog row"), z.parse().expect("catalog row"))
}

pub fn shor9() -> SubsystemCode {
    SubsystemCode::new(
        9,
        ops(&[
            "XXXXXXIII",
            "XXXIIIXXX",
            "ZZIIIIIII",
            "IZZIIIIII",
            "IIIZZIIII",
            "IIIIZZIII",
            "IIIIIIZZI",
            "IIIIIIIZZ",
        ]),
        Vec::new(),
        vec![pair("XXXXXXXXX", "ZZZZZZZZZ")],
    )
}

pub fn bacon_shor9() -> SubsystemCode {
    SubsystemCode::new(
        9,
        ops(&["XXXXXXIII", "XXXIIIXXX", "ZZIZZIZZI", "IZZIZZIZZ"]),
        vec![
            pair("IIXIIIIIX", "IZZIIIIII"),
            pair("IIIIIXIIX", "IIIIZZIII"),
            pair("XIIIIIXII", "ZZIIIIIII"),
            pair("IIIXIIXII", "IIIZZIIII"),
        ],
        vec![pair("XXXXXXXXX", "ZZZZZZZZZ")],
    )
}

pub fn five_qubit() -> SubsystemCode {
    SubsystemCode::new(
        5,
        ops(&["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]),
        Vec::new(),
        vec![pair("XXXXX", "ZZZZZ")],
    )
}

pub fn steane7() -> SubsystemCode {
    SubsystemCode::new(
        7,
        ops(&["IIIXXXX", "IXXIIXX", "XIXIXIX", "IIIZZZZ", "IZZIIZZ", "ZIZIZIZ"]),
        Vec::new(),
        vec![pair("XXXXXXX", "ZZZZZZZ")],
    )
}

/// Looks a code up by name and checks it against its nominal `[[n,k,r,d]]`.
pub fn catalog(name: &str) -> Result<SubsystemCode, CodeError> {
    let (code, expected) = match name {
        "shor9" => (shor9(), (9, 1, 0, 3)),
        "bacon-shor-9" => (bacon_shor9(), (9, 1, 4, 3)),
        "five-qubit" => (five_qubit(), (5, 1, 0, 3)),
        "steane7" => (steane7(), (7, 1, 0, 3)),
        other => return Err(CodeError::UnknownCatalog(other.to_string())),
    };
    let fail = |reason: String| CodeError::CatalogSelfCheck { name: name.to_string(), reason };
    let params = code.parameters().map_err(|e| fail(e.to_string()))?;
    let d = distance::distance(&code, DistanceMethod::Coset, distance::DEFAULT_BUDGET)
        .map_err(|e| fail(e.to_string()))?;
    let got = (params.n, params.k, params.r, d);
    if got != expected {
        return Err(fail(format!("expected {expected:?}, found {got:?}")));
    }
    Ok(code)
}

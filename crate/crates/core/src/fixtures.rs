//! Named words and the bundled automata and linear representations.

use crate::automata::Dfao;
use crate::linrep::LinearRep;
use crate::word::{Letter, Morphism, PrefixBuffer, WordError};

/// Additive complexity of the fixed point of `0->012 1->112002 2->`.
pub const COLLINEAR_ADDITIVE_DFAO: &str = include_str!("../fixtures/collinear_additive.dfao");
/// Additive complexity of the ternary Thue–Morse word.
pub const TERNARY_TM_ADDITIVE_DFAO: &str = include_str!("../fixtures/ternary_tm_additive.dfao");
/// Rudin–Shapiro in 0/1 form, states named as in the semigroup-trick example.
pub const RUDIN_SHAPIRO_DFAO: &str = include_str!("../fixtures/rudin_shapiro.dfao");
/// A 4-dimensional linear representation of the same sequence.
pub const RUDIN_SHAPIRO_LINREP: &str = include_str!("../fixtures/rudin_shapiro.linrep");

pub fn collinear_additive_dfao() -> Dfao {
    COLLINEAR_ADDITIVE_DFAO.parse().expect("bundled fixture parses")
}

pub fn ternary_tm_additive_dfao() -> Dfao {
    TERNARY_TM_ADDITIVE_DFAO.parse().expect("bundled fixture parses")
}

pub fn rudin_shapiro_dfao() -> Dfao {
    RUDIN_SHAPIRO_DFAO.parse().expect("bundled fixture parses")
}

pub fn rudin_shapiro_linrep() -> LinearRep {
    RUDIN_SHAPIRO_LINREP.parse().expect("bundled fixture parses")
}

/// Names accepted by [`named_word`].
pub const WORD_NAMES: &[&str] = &[
    "fib", "trib", "tm3", "tm:L,M", "vtm", "vtm:L", "collinear", "cww", "ccss",
];

/// A morphism and seed for a named word.
///
/// `tm:L,M` is `0->0LM, L->LM0, M->M0L`; `vtm:L` is `0->01L, 1->0L, L->1`
/// (so `vtm` is `vtm:2`).
pub fn named_word(name: &str) -> Option<(Morphism, Letter)> {
    let m = |s: &str| s.parse::<Morphism>().ok();
    let spec = match name {
        "fib" => m("0->01 1->0"),
        "trib" => m("0->01 1->02 2->0"),
        "tm3" => m("0->012 1->120 2->201"),
        "vtm" => m("0->012 1->02 2->1"),
        "collinear" => m("0->012 1->112002 2->"),
        "cww" => m("0->01 1->12 2->20"),
        "ccss" => m("0->03 1->43 3->1 4->01"),
        _ => {
            if let Some(rest) = name.strip_prefix("tm:") {
                let (l, mm) = rest.split_once(',')?;
                let (l, mm): (Letter, Letter) = (l.trim().parse().ok()?, mm.trim().parse().ok()?);
                if l == 0 || mm == 0 || l == mm {
                    return None;
                }
                Morphism::new([(0, vec![0, l, mm]), (l, vec![l, mm, 0]), (mm, vec![mm, 0, l])]).ok()
            } else if let Some(rest) = name.strip_prefix("vtm:") {
                let l: Letter = rest.trim().parse().ok()?;
                if l < 2 {
                    return None;
                }
                Morphism::new([(0, vec![0, 1, l]), (1, vec![0, l]), (l, vec![1])]).ok()
            } else {
                None
            }
        }
    }?;
    Some((spec, 0))
}

/// Prefix buffer over a named word.
pub fn named_prefix(name: &str) -> Option<Result<PrefixBuffer, WordError>> {
    named_word(name).map(|(m, seed)| PrefixBuffer::fixed_point(m, seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::format_word;

    fn prefix(name: &str, n: usize) -> String {
        let (m, a) = named_word(name).unwrap();
        format_word(&m.fixed_point_prefix(a, n).unwrap())
    }

    #[test]
    fn named_prefixes() {
        assert_eq!(prefix("trib", 12), "010201001020");
        assert_eq!(prefix("fib", 10), "0100101001");
        assert_eq!(prefix("vtm", 8), "01202101");
        assert_eq!(prefix("vtm:2", 8), "01202101");
        assert_eq!(prefix("tm3", 9), "012120201");
        assert_eq!(prefix("tm:1,2", 9), "012120201");
        assert_eq!(prefix("collinear", 16), "0121120021120021");
        assert_eq!(prefix("cww", 8), "01121220");
        assert_eq!(prefix("ccss", 8), "03143011");
        assert_eq!(prefix("vtm:3", 6), "013031");
    }

    #[test]
    fn rejects_bad_names() {
        for bad in ["", "tm:1", "tm:0,2", "tm:2,2", "vtm:1", "vtm:x", "unknown"] {
            assert!(named_word(bad).is_none(), "{bad}");
        }
    }

    #[test]
    fn bundled_fixtures_parse() {
        assert_eq!(collinear_additive_dfao().num_states(), 4);
        assert_eq!(ternary_tm_additive_dfao().num_states(), 3);
        assert_eq!(rudin_shapiro_dfao().num_states(), 4);
        assert_eq!(rudin_shapiro_linrep().dim(), 4);
    }
}

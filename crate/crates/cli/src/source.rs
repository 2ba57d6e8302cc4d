use anyhow::{bail, Context, Result};
use clap::Args;

use addcomp::fixtures::{named_prefix, WORD_NAMES};
use addcomp::word::{parse_word, Coding, Letter, Morphism, PrefixBuffer, Valuation};

/// Where a word comes from: a morphism, a named word, or a literal.
#[derive(Debug, Clone, Args)]
pub struct WordArgs {
    /// Morphism such as "0->01 1->02 2->0"
    #[arg(short = 'm', long, conflicts_with_all = ["word", "literal"])]
    pub morphism: Option<String>,
    /// Named word: fib, trib, tm3, tm:L,M, vtm, vtm:L, collinear, cww, ccss
    #[arg(short = 'w', long, conflicts_with = "literal")]
    pub word: Option<String>,
    /// A finite word given letter by letter
    #[arg(long)]
    pub literal: Option<String>,
    /// Letter the fixed point starts with
    #[arg(short = 'a', long, default_value_t = 0)]
    pub seed: Letter,
    /// Coding applied to the fixed point, in morphism syntax ("0->0 1->0 2->1")
    #[arg(short = 'c', long)]
    pub coding: Option<String>,
}

impl WordArgs {
    pub fn prefix(&self) -> Result<PrefixBuffer> {
        let buf = match (&self.morphism, &self.word, &self.literal) {
            (Some(m), None, None) => {
                let m: Morphism = m.parse().with_context(|| format!("morphism {m:?}"))?;
                match &self.coding {
                    Some(c) => {
                        let c: Coding = c.parse().with_context(|| format!("coding {c:?}"))?;
                        PrefixBuffer::coded_fixed_point(m, c, self.seed)?
                    }
                    None => PrefixBuffer::fixed_point(m, self.seed)?,
                }
            }
            (None, Some(name), None) => {
                if self.coding.is_some() {
                    bail!("--coding needs --morphism");
                }
                named_prefix(name)
                    .with_context(|| {
                        format!("unknown word {name:?}; known: {}", WORD_NAMES.join(", "))
                    })??
            }
            (None, None, Some(w)) => PrefixBuffer::literal(parse_word(w)?),
            _ => bail!("give one of --morphism, --word or --literal"),
        };
        Ok(buf)
    }
}

/// `--valuation "0:0,1:1,2:3"`, defaulting to each letter's own value.
pub fn valuation(spec: Option<&str>, src: &PrefixBuffer) -> Result<Valuation> {
    match spec {
        Some(s) => Ok(s.parse().with_context(|| format!("valuation {s:?}"))?),
        None => Ok(Valuation::identity(&src.alphabet())),
    }
}

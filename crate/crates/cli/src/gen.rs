use std::path::PathBuf;

use anyhow::{bail, Result};
use projpair::generators::parse_blocks;
use projpair::{
    gen_pair_oblique_rational, gen_pair_orthogonal, gen_prescribed, write_pair, AnyPair,
    PrescribedSpec,
};

use crate::Kind;

pub struct GenArgs {
    pub kind: Kind,
    pub dim: Option<usize>,
    pub seed: u64,
    pub rank_p: Option<usize>,
    pub rank_q: Option<usize>,
    pub entry_bound: i64,
    pub d10: usize,
    pub d01: usize,
    pub d11: usize,
    pub d00: usize,
    pub blocks: String,
    pub conjugate: bool,
    pub out: Option<PathBuf>,
}

pub fn run(a: GenArgs) -> Result<u8> {
    let pair: AnyPair = match a.kind {
        Kind::Orthogonal | Kind::Oblique => {
            let Some(dim) = a.dim else {
                bail!("--dim is required for this kind");
            };
            let rp = a.rank_p.unwrap_or(dim / 2);
            let rq = a.rank_q.unwrap_or(dim / 2);
            if matches!(a.kind, Kind::Orthogonal) {
                gen_pair_orthogonal(dim, rp, rq, a.seed)?.into()
            } else {
                gen_pair_oblique_rational(dim, rp, rq, a.seed, a.entry_bound)?.into()
            }
        }
        Kind::Prescribed => {
            let spec = PrescribedSpec {
                d10: a.d10,
                d01: a.d01,
                d11: a.d11,
                d00: a.d00,
                blocks: parse_blocks(&a.blocks)?,
                conjugate: a.conjugate,
                seed: a.seed,
            };
            if let Some(dim) = a.dim {
                if dim != spec.dim() {
                    bail!(
                        "--dim {dim} does not match the prescribed total {}",
                        spec.dim()
                    );
                }
            }
            let (pair, index) = gen_prescribed(&spec)?;
            eprintln!("expected index {index}");
            pair.into()
        }
    };
    match &a.out {
        Some(path) => write_pair(path, &pair)?,
        None => print!("{}", pair.to_json_string()),
    }
    Ok(0)
}

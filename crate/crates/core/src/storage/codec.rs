//! One symbol-level facade over the three codec shapes, plus the
//! manifest↔codec derivation check: a manifest must reproduce itself from
//! its own (kind, q, n, k, d, b).

use super::manifest::{CodeKind, Manifest};
use super::StorageError;
use crate::linalg::GfMatrix;
use crate::nmbr::{NmbrCode, NmbrEncoding, NmbrParams};
use crate::nmsr::{NmsrCode, NmsrParams, PuncturedNmsr};
use crate::share::{NodeShare, RepairPacket};

pub enum StripeCodec {
    Nmbr(NmbrCode),
    Nmsr(NmsrCode),
    Punctured(PuncturedNmsr),
}

impl StripeCodec {
    /// Builds a codec from user parameters. For nmsr, d is derived (2k−2)
    /// and checked when supplied; nmsr-punct builds the (n+1, k+1) parent
    /// with the given b (which must be divisible by k+1) and punctures it.
    pub fn from_spec(
        kind: CodeKind,
        n: u64,
        k: u64,
        d: Option<u64>,
        q: u64,
        b: u64,
    ) -> Result<Self, StorageError> {
        use crate::share::ParamError;
        match kind {
            CodeKind::Nmbr | CodeKind::NmbrSystematic => {
                let encoding = if kind == CodeKind::Nmbr {
                    NmbrEncoding::Plain
                } else {
                    NmbrEncoding::SystematicCauchy
                };
                let d = d.ok_or_else(|| {
                    StorageError::BadArgument("--d is required for nmbr codes".into())
                })?;
                let params = NmbrParams::validate(n, k, d, q, b, encoding)?;
                Ok(StripeCodec::Nmbr(NmbrCode::new(params)?))
            }
            CodeKind::Nmsr => {
                let expected = 2 * k.max(1) - 2;
                if let Some(d) = d {
                    if d != expected {
                        return Err(ParamError::WrongRepairDegree { d, expected }.into());
                    }
                }
                let params = NmsrParams::validate(n, k, q, b)?;
                Ok(StripeCodec::Nmsr(NmsrCode::new(params)?))
            }
            CodeKind::NmsrPunctured => {
                let expected = 2 * k.max(1) - 1;
                if let Some(d) = d {
                    if d != expected {
                        return Err(ParamError::WrongRepairDegree { d, expected }.into());
                    }
                }
                let params = NmsrParams::validate(n + 1, k + 1, q, b)?;
                let parent = NmsrCode::new(params)?;
                Ok(StripeCodec::Punctured(PuncturedNmsr::new(parent)?))
            }
        }
    }

    /// Rebuilds the codec from a manifest and verifies the manifest's stored
    /// polynomial and exponents are exactly what the parameters re-derive —
    /// the cross-implementation determinism check.
    pub fn from_manifest(m: &Manifest) -> Result<Self, StorageError> {
        let codec = Self::from_spec(m.code_kind, m.n, m.k, Some(m.d), m.q, m.b)?;
        if codec.poly() != m.poly {
            return Err(StorageError::ManifestMismatch(format!(
                "stored polynomial {:?} but parameters derive {:?}",
                m.poly,
                codec.poly()
            )));
        }
        if codec.exponents() != m.exponents {
            return Err(StorageError::ManifestMismatch(format!(
                "stored exponents {:?} but parameters derive {:?}",
                m.exponents,
                codec.exponents()
            )));
        }
        if u128::from(m.stripe_symbols) != self_stripe_symbols(&codec) {
            return Err(StorageError::ManifestMismatch(format!(
                "stored stripe size {} but parameters derive {}",
                m.stripe_symbols,
                self_stripe_symbols(&codec)
            )));
        }
        Ok(codec)
    }

    pub fn kind(&self) -> CodeKind {
        match self {
            StripeCodec::Nmbr(c) => match c.params().encoding {
                NmbrEncoding::Plain => CodeKind::Nmbr,
                NmbrEncoding::SystematicCauchy => CodeKind::NmbrSystematic,
            },
            StripeCodec::Nmsr(_) => CodeKind::Nmsr,
            StripeCodec::Punctured(_) => CodeKind::NmsrPunctured,
        }
    }

    pub fn n(&self) -> u64 {
        match self {
            StripeCodec::Nmbr(c) => c.params().n,
            StripeCodec::Nmsr(c) => c.params().n,
            StripeCodec::Punctured(c) => c.n(),
        }
    }

    pub fn k(&self) -> u64 {
        match self {
            StripeCodec::Nmbr(c) => c.params().k,
            StripeCodec::Nmsr(c) => c.params().k,
            StripeCodec::Punctured(c) => c.k(),
        }
    }

    pub fn d(&self) -> u64 {
        match self {
            StripeCodec::Nmbr(c) => c.params().d,
            StripeCodec::Nmsr(c) => c.params().d,
            StripeCodec::Punctured(c) => c.d(),
        }
    }

    pub fn b(&self) -> u64 {
        match self {
            StripeCodec::Nmbr(c) => c.params().b,
            StripeCodec::Nmsr(c) => c.params().b,
            StripeCodec::Punctured(c) => c.parent().params().b,
        }
    }

    pub fn q(&self) -> u32 {
        match self {
            StripeCodec::Nmbr(c) => c.params().field.modulus(),
            StripeCodec::Nmsr(c) => c.params().field.modulus(),
            StripeCodec::Punctured(c) => c.parent().params().field.modulus(),
        }
    }

    pub fn alpha(&self) -> u128 {
        match self {
            StripeCodec::Nmbr(c) => c.params().alpha(),
            StripeCodec::Nmsr(c) => c.params().alpha(),
            StripeCodec::Punctured(c) => c.alpha(),
        }
    }

    pub fn beta(&self) -> u128 {
        match self {
            StripeCodec::Nmbr(c) => c.params().beta(),
            StripeCodec::Nmsr(c) => c.params().beta(),
            StripeCodec::Punctured(c) => c.beta(),
        }
    }

    pub fn stripe_symbols(&self) -> u128 {
        self_stripe_symbols(self)
    }

    pub fn poly(&self) -> Vec<u16> {
        match self {
            StripeCodec::Nmbr(c) => c.rep().poly().to_vec(),
            StripeCodec::Nmsr(c) => c.rep().poly().to_vec(),
            StripeCodec::Punctured(c) => c.parent().rep().poly().to_vec(),
        }
    }

    pub fn exponents(&self) -> Vec<u64> {
        match self {
            StripeCodec::Nmbr(c) => c.params().exponents.clone(),
            StripeCodec::Nmsr(c) => c.indices().to_vec(),
            StripeCodec::Punctured(c) => c.parent().indices().to_vec(),
        }
    }

    fn share_shape(&self) -> (usize, usize) {
        match self {
            StripeCodec::Nmbr(c) => {
                (c.params().m() as usize, (c.params().d * c.params().m()) as usize)
            }
            StripeCodec::Nmsr(c) => (c.params().m() as usize, c.params().s_dim() as usize),
            StripeCodec::Punctured(c) => (
                c.parent().params().m() as usize,
                c.parent().params().s_dim() as usize,
            ),
        }
    }

    fn packet_shape(&self) -> (usize, usize) {
        let m = self.share_shape().0;
        (m, m)
    }

    fn field(&self) -> crate::gf::PrimeField {
        match self {
            StripeCodec::Nmbr(c) => c.params().field,
            StripeCodec::Nmsr(c) => c.params().field,
            StripeCodec::Punctured(c) => c.parent().params().field,
        }
    }

    fn share_from_symbols(&self, node_id: u32, symbols: &[u16]) -> Result<NodeShare, StorageError> {
        let (r, c) = self.share_shape();
        Ok(NodeShare {
            node_id,
            payload: GfMatrix::from_symbols(self.field(), r, c, symbols)
                .map_err(crate::share::CodecError::from)?,
        })
    }

    /// Encodes one stripe; returns each node's α symbols, node order 1..n.
    pub fn encode_stripe(&self, stripe: &[u16]) -> Result<Vec<Vec<u16>>, StorageError> {
        let shares = match self {
            StripeCodec::Nmbr(c) => c.encode(stripe)?,
            StripeCodec::Nmsr(c) => c.encode(stripe)?,
            StripeCodec::Punctured(c) => c.encode(stripe)?,
        };
        Ok(shares.into_iter().map(|s| s.payload.symbols().to_vec()).collect())
    }

    /// The β symbols helper(share_stripe) contributes toward `target`.
    pub fn packet_for(
        &self,
        helper_id: u32,
        share_stripe: &[u16],
        target: u32,
    ) -> Result<Vec<u16>, StorageError> {
        let share = self.share_from_symbols(helper_id, share_stripe)?;
        let pkt = match self {
            StripeCodec::Nmbr(c) => c.repair_helper(&share, target)?,
            StripeCodec::Nmsr(c) => c.repair_helper(&share, target)?,
            StripeCodec::Punctured(c) => c.repair_helper(&share, target)?,
        };
        Ok(pkt.payload.symbols().to_vec())
    }

    pub fn assemble(
        &self,
        target: u32,
        packets: &[(u32, Vec<u16>)],
    ) -> Result<Vec<u16>, StorageError> {
        let (r, c) = self.packet_shape();
        let f = self.field();
        let pkts: Vec<RepairPacket> = packets
            .iter()
            .map(|(helper, sym)| {
                Ok(RepairPacket {
                    helper_id: *helper,
                    target_id: target,
                    payload: GfMatrix::from_symbols(f, r, c, sym)
                        .map_err(crate::share::CodecError::from)?,
                })
            })
            .collect::<Result<_, StorageError>>()?;
        let share = match self {
            StripeCodec::Nmbr(codec) => codec.repair_assemble(&pkts)?,
            StripeCodec::Nmsr(codec) => codec.repair_assemble(&pkts)?,
            StripeCodec::Punctured(codec) => codec.repair_assemble(&pkts)?,
        };
        Ok(share.payload.symbols().to_vec())
    }

    pub fn reconstruct_stripe(
        &self,
        shares: &[(u32, Vec<u16>)],
    ) -> Result<Vec<u16>, StorageError> {
        let built: Vec<NodeShare> = shares
            .iter()
            .map(|(id, sym)| self.share_from_symbols(*id, sym))
            .collect::<Result<_, _>>()?;
        Ok(match self {
            StripeCodec::Nmbr(c) => c.reconstruct(&built)?,
            StripeCodec::Nmsr(c) => c.reconstruct(&built)?,
            StripeCodec::Punctured(c) => c.reconstruct(&built)?,
        })
    }
}

fn self_stripe_symbols(c: &StripeCodec) -> u128 {
    match c {
        StripeCodec::Nmbr(c) => c.params().file_symbols(),
        StripeCodec::Nmsr(c) => c.params().file_symbols(),
        StripeCodec::Punctured(c) => c.file_symbols(),
    }
}

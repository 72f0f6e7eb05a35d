//! Claimed bases together with where they came from and whether they check out.

use crate::constructions::ConstructionTag;
use crate::domain::{codeset_to_partitions, partitions_to_codeset, CodeSet, Params, PointPerm, RegularPartition};
use crate::error::Result;
use crate::formulas::{base_size_alt, base_size_sym, Group};
use crate::verifier::is_base;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Unverified,
    VerifiedBase,
    /// A nontrivial point permutation fixing every partition (even for Alt).
    Refuted(PointPerm),
    /// The base size is known but no witness was produced within budget.
    Unavailable { candidates: u64 },
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Unverified => "unverified",
            Status::VerifiedBase => "verified-base",
            Status::Refuted(_) => "refuted",
            Status::Unavailable { .. } => "witness-unavailable",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessCertificate {
    pub params: Params,
    pub group: Group,
    pub partitions: Vec<RegularPartition>,
    pub codeset: Option<CodeSet>,
    pub provenance: ConstructionTag,
    pub status: Status,
}

/// Base size for `group`, or `None` when undefined.
pub fn expected_size(params: Params, group: Group) -> Result<Option<u32>> {
    let answer = match group {
        Group::Sym => base_size_sym(params.a(), params.b())?,
        Group::Alt => base_size_alt(params.a(), params.b())?,
    };
    Ok(answer.value)
}

impl WitnessCertificate {
    /// Runs the exact verifier on the partitions of `set`.
    pub fn certify(params: Params, group: Group, set: CodeSet, provenance: ConstructionTag) -> Result<WitnessCertificate> {
        let partitions = codeset_to_partitions(&set)?;
        let mut cert = WitnessCertificate {
            params,
            group,
            partitions,
            codeset: Some(set),
            provenance,
            status: Status::Unverified,
        };
        cert.verify()?;
        Ok(cert)
    }

    pub fn from_partitions(params: Params, group: Group, partitions: Vec<RegularPartition>, provenance: ConstructionTag) -> Result<WitnessCertificate> {
        let codeset = partitions_to_codeset(&partitions)?;
        let mut cert = WitnessCertificate {
            params,
            group,
            partitions,
            codeset: Some(codeset),
            provenance,
            status: Status::Unverified,
        };
        cert.verify()?;
        Ok(cert)
    }

    pub fn unavailable(params: Params, group: Group, provenance: ConstructionTag, candidates: u64) -> WitnessCertificate {
        WitnessCertificate {
            params,
            group,
            partitions: Vec::new(),
            codeset: None,
            provenance,
            status: Status::Unavailable { candidates },
        }
    }

    /// Re-runs the verifier and updates the status.
    pub fn verify(&mut self) -> Result<&Status> {
        let verdict = is_base(&self.partitions, self.group)?;
        self.status = if verdict.is_base {
            Status::VerifiedBase
        } else {
            Status::Refuted(verdict.witness.expect("refutations carry a witness"))
        };
        Ok(&self.status)
    }

    pub fn is_verified(&self) -> bool {
        self.status == Status::VerifiedBase
    }

    pub fn size(&self) -> usize {
        self.partitions.len()
    }

    /// Verified, and exactly as many partitions as the base size formula says.
    pub fn is_minimal_verified(&self) -> Result<bool> {
        let expected = expected_size(self.params, self.group)?;
        Ok(self.is_verified() && expected == Some(self.size() as u32))
    }
}

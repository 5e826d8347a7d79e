//! The trusted-record layer: an append-only hash-chained ledger of
//! registrations and a content-addressed object store.
//!
//! Both are local, single-writer simulations of their distributed
//! counterparts. The ledger persists one record per line; every byte of a
//! line is either structural (strictly parsed) or covered by the block
//! hash, so any single-byte mutation of a persisted chain is detectable.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::util;

#[derive(Debug, Error)]
pub enum RegistryError {
    #[error("invalid registration args: {0}")]
    InvalidArgs(String),
    #[error("ledger i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("ledger line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("cas object {0} not found")]
    CasNotFound(String),
    #[error("cas object {cid} corrupt: content hashes to {actual}")]
    CasCorrupt { cid: String, actual: String },
    #[error("invalid cid '{0}'")]
    BadCid(String),
    #[error("identity text must be non-empty")]
    EmptyIdentity,
}

/// Chain validation outcome carrying the first violation found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainViolation {
    /// Block number (or line position) where validation first failed.
    pub position: u64,
    pub reason: String,
}

impl fmt::Display for ChainViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "block {}: {}", self.position, self.reason)
    }
}

const ZERO_HASH: &str = "0000000000000000000000000000000000000000000000000000000000000000";

fn is_strict_hex(s: &str, len: usize) -> bool {
    s.len() == len && s.bytes().all(|b| b.is_ascii_digit() || (b'a'..=b'f').contains(&b))
}

/// First 20 bytes of SHA-256 of the identity text, 0x-prefixed.
pub fn derive_address(identity_text: &str) -> Result<String, RegistryError> {
    if identity_text.is_empty() {
        return Err(RegistryError::EmptyIdentity);
    }
    let digest = Sha256::digest(identity_text.as_bytes());
    Ok(format!("0x{}", util::to_hex(&digest[..20])))
}

/// Registration payload recorded in a block.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct RegistrationArgs {
    /// "0x" + 40 lowercase hex.
    pub owner_address: String,
    /// 64 lowercase hex: content digest of the original raster.
    pub image_hash: String,
    pub creation_name: String,
    pub creation_author: String,
    pub copyright_owner: String,
    /// 16 lowercase hex: the perceptual-hash token.
    pub image_id: String,
    pub mail_address: String,
}

impl RegistrationArgs {
    pub fn validate(&self) -> Result<(), RegistryError> {
        if self.owner_address.len() != 42
            || !self.owner_address.starts_with("0x")
            || !is_strict_hex(&self.owner_address[2..], 40)
        {
            return Err(RegistryError::InvalidArgs(format!(
                "owner address '{}' must be 0x + 40 lowercase hex",
                self.owner_address
            )));
        }
        if !is_strict_hex(&self.image_hash, 64) {
            return Err(RegistryError::InvalidArgs(
                "image hash must be 64 lowercase hex".into(),
            ));
        }
        if !is_strict_hex(&self.image_id, 16) {
            return Err(RegistryError::InvalidArgs(
                "image id must be 16 lowercase hex".into(),
            ));
        }
        Ok(())
    }

    fn canonical_fields(&self) -> [&str; 7] {
        [
            &self.owner_address,
            &self.image_hash,
            &self.creation_name,
            &self.creation_author,
            &self.copyright_owner,
            &self.image_id,
            &self.mail_address,
        ]
    }

    /// SHA-256 over the length-prefixed canonical form of the args.
    pub fn transaction_hash(&self) -> String {
        util::to_hex(&Sha256::digest(canonical_bytes(&self.canonical_fields())))
    }
}

/// Length-prefixed canonical serialization: "<len>:<utf8>," per field. The
/// hash input is this form, never the on-disk rendering.
fn canonical_bytes(fields: &[&str]) -> Vec<u8> {
    let mut out = Vec::new();
    for f in fields {
        out.extend_from_slice(f.len().to_string().as_bytes());
        out.push(b':');
        out.extend_from_slice(f.as_bytes());
        out.push(b',');
    }
    out
}

/// One ledger record.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Block {
    pub block_number: u64,
    pub timestamp: u64,
    pub prev_block_hash: String,
    pub block_hash: String,
    pub transaction_hash: String,
    pub transaction_index: u64,
    pub log_index: u64,
    pub args: RegistrationArgs,
    /// Cid of the original raster object in the CAS. Derived from the args'
    /// image hash before the block is sealed; the watermarked asset's cid
    /// depends on the block hash and therefore cannot be hash-covered.
    pub cas_cid: String,
}

impl Block {
    /// Hash input: every field except the block hash itself, canonical form.
    fn hash_input(&self) -> Vec<u8> {
        let number = self.block_number.to_string();
        let ts = self.timestamp.to_string();
        let txi = self.transaction_index.to_string();
        let logi = self.log_index.to_string();
        let mut fields: Vec<&str> = vec![
            &number,
            &ts,
            &self.prev_block_hash,
            &self.transaction_hash,
            &txi,
            &logi,
        ];
        fields.extend(self.args.canonical_fields());
        fields.push(&self.cas_cid);
        canonical_bytes(&fields)
    }

    pub fn compute_hash(&self) -> String {
        util::to_hex(&Sha256::digest(self.hash_input()))
    }

    /// Block hash rendered the way payloads embed it.
    pub fn payload_text(&self) -> String {
        format!("0x{}", self.block_hash)
    }
}

/// In-memory validated view of the ledger.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Chain {
    blocks: Vec<Block>,
}

impl Chain {
    pub fn new() -> Chain {
        Chain::default()
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn find_by_hash(&self, block_hash: &str) -> Option<&Block> {
        self.blocks.iter().find(|b| b.block_hash == block_hash)
    }

    /// Append a new sealed block. The clock must be non-decreasing; the
    /// recorded timestamp is clamped so that (timestamp, block_number) is
    /// strictly ordered regardless.
    pub fn append_registration(
        &mut self,
        args: RegistrationArgs,
        cas_cid: &str,
        clock: &dyn Clock,
    ) -> Result<&Block, RegistryError> {
        args.validate()?;
        Cid::parse(cas_cid)?;
        let prev_block_hash = self
            .blocks
            .last()
            .map(|b| b.block_hash.clone())
            .unwrap_or_else(|| ZERO_HASH.to_string());
        let min_ts = self.blocks.last().map(|b| b.timestamp).unwrap_or(0);
        let mut block = Block {
            block_number: self.blocks.len() as u64,
            timestamp: clock.now_secs().max(min_ts),
            prev_block_hash,
            block_hash: String::new(),
            transaction_hash: args.transaction_hash(),
            transaction_index: 0,
            log_index: 0,
            args,
            cas_cid: cas_cid.to_string(),
        };
        block.block_hash = block.compute_hash();
        self.blocks.push(block);
        Ok(self.blocks.last().expect("just pushed"))
    }

    /// Recompute every hash and link; the first violation is reported.
    pub fn validate(&self) -> Result<(), ChainViolation> {
        let mut prev_hash = ZERO_HASH.to_string();
        let mut prev_ts = 0u64;
        for (i, block) in self.blocks.iter().enumerate() {
            let position = i as u64;
            if block.block_number != position {
                return Err(ChainViolation {
                    position,
                    reason: format!(
                        "block number {} breaks contiguous numbering",
                        block.block_number
                    ),
                });
            }
            if block.prev_block_hash != prev_hash {
                return Err(ChainViolation {
                    position,
                    reason: "previous-hash link broken".into(),
                });
            }
            if let Err(e) = block.args.validate() {
                return Err(ChainViolation {
                    position,
                    reason: e.to_string(),
                });
            }
            if block.transaction_hash != block.args.transaction_hash() {
                return Err(ChainViolation {
                    position,
                    reason: "transaction hash does not match args".into(),
                });
            }
            let recomputed = block.compute_hash();
            if block.block_hash != recomputed {
                return Err(ChainViolation {
                    position,
                    reason: "stored block hash does not match recomputed hash".into(),
                });
            }
            if block.timestamp < prev_ts {
                return Err(ChainViolation {
                    position,
                    reason: "timestamp regression".into(),
                });
            }
            prev_hash = block.block_hash.clone();
            prev_ts = block.timestamp;
        }
        Ok(())
    }
}

/// Injectable time source; tests use [`FixedClock`].
pub trait Clock {
    fn now_secs(&self) -> u64;
}

pub struct SystemClock;

impl Clock for SystemClock {
    fn now_secs(&self) -> u64 {
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0)
    }
}

pub struct FixedClock(pub u64);

impl Clock for FixedClock {
    fn now_secs(&self) -> u64 {
        self.0
    }
}

// ---------------------------------------------------------------------------
// Line format
// ---------------------------------------------------------------------------

const FIELDS_PER_LINE: usize = 15;

fn escape(field: &str) -> String {
    let mut out = String::with_capacity(field.len());
    for c in field.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            other => out.push(other),
        }
    }
    out
}

fn unescape(field: &str) -> Result<String, String> {
    let mut out = String::with_capacity(field.len());
    let mut chars = field.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('\\') => out.push('\\'),
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            other => return Err(format!("bad escape '\\{}'", other.unwrap_or(' '))),
        }
    }
    Ok(out)
}

/// Strict decimal: no sign, no leading zeros (except "0"), digits only.
/// Parsing is strict so that a mutated-but-equivalent rendering can never
/// round-trip to the same hash.
fn parse_number(s: &str) -> Result<u64, String> {
    if s.is_empty() || (s.len() > 1 && s.starts_with('0')) || !s.bytes().all(|b| b.is_ascii_digit())
    {
        return Err(format!("'{s}' is not a strict decimal"));
    }
    s.parse::<u64>().map_err(|e| e.to_string())
}

/// One record per line, tab-separated, fields in documented order:
/// block_number, timestamp, prev_block_hash, block_hash, transaction_hash,
/// transaction_index, log_index, owner_address, image_hash, creation_name,
/// creation_author, copyright_owner, image_id, mail_address, cas_cid.
pub fn block_to_line(b: &Block) -> String {
    [
        b.block_number.to_string(),
        b.timestamp.to_string(),
        b.prev_block_hash.clone(),
        b.block_hash.clone(),
        b.transaction_hash.clone(),
        b.transaction_index.to_string(),
        b.log_index.to_string(),
        escape(&b.args.owner_address),
        escape(&b.args.image_hash),
        escape(&b.args.creation_name),
        escape(&b.args.creation_author),
        escape(&b.args.copyright_owner),
        escape(&b.args.image_id),
        escape(&b.args.mail_address),
        escape(&b.cas_cid),
    ]
    .join("\t")
}

pub fn block_from_line(line: &str) -> Result<Block, String> {
    let parts: Vec<&str> = line.split('\t').collect();
    if parts.len() != FIELDS_PER_LINE {
        return Err(format!(
            "expected {FIELDS_PER_LINE} fields, got {}",
            parts.len()
        ));
    }
    let hex_field = |s: &str, len: usize, name: &str| -> Result<String, String> {
        if !is_strict_hex(s, len) {
            return Err(format!("{name} must be {len} lowercase hex chars"));
        }
        Ok(s.to_string())
    };
    Ok(Block {
        block_number: parse_number(parts[0])?,
        timestamp: parse_number(parts[1])?,
        prev_block_hash: hex_field(parts[2], 64, "prev block hash")?,
        block_hash: hex_field(parts[3], 64, "block hash")?,
        transaction_hash: hex_field(parts[4], 64, "transaction hash")?,
        transaction_index: parse_number(parts[5])?,
        log_index: parse_number(parts[6])?,
        args: RegistrationArgs {
            owner_address: unescape(parts[7])?,
            image_hash: unescape(parts[8])?,
            creation_name: unescape(parts[9])?,
            creation_author: unescape(parts[10])?,
            copyright_owner: unescape(parts[11])?,
            image_id: unescape(parts[12])?,
            mail_address: unescape(parts[13])?,
        },
        cas_cid: unescape(parts[14])?,
    })
}

/// Parse a full ledger text (one record per line) into a chain.
pub fn parse_chain_text(text: &str) -> Result<Chain, RegistryError> {
    let mut blocks = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let block = block_from_line(line).map_err(|reason| RegistryError::Parse {
            line: i + 1,
            reason,
        })?;
        blocks.push(block);
    }
    Ok(Chain { blocks })
}

/// File-backed append-only ledger: `<dir>/ledger.log`.
pub struct Ledger {
    path: PathBuf,
}

impl Ledger {
    pub fn open(dir: impl AsRef<Path>) -> Result<Ledger, RegistryError> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir)?;
        Ok(Ledger {
            path: dir.join("ledger.log"),
        })
    }

    pub fn file_path(&self) -> &Path {
        &self.path
    }

    pub fn read_chain(&self) -> Result<Chain, RegistryError> {
        if !self.path.exists() {
            return Ok(Chain::new());
        }
        parse_chain_text(&fs::read_to_string(&self.path)?)
    }

    /// Append a registration to the persisted chain and return the new block.
    pub fn append_registration(
        &self,
        args: RegistrationArgs,
        cas_cid: &str,
        clock: &dyn Clock,
    ) -> Result<Block, RegistryError> {
        let mut chain = self.read_chain()?;
        let block = chain.append_registration(args, cas_cid, clock)?.clone();
        let mut file = fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)?;
        file.write_all(block_to_line(&block).as_bytes())?;
        file.write_all(b"\n")?;
        Ok(block)
    }
}

// ---------------------------------------------------------------------------
// Content-addressed store
// ---------------------------------------------------------------------------

/// Content identifier: "cas1-" + SHA-256 hex of the stored bytes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct Cid(String);

impl Cid {
    pub fn from_bytes(content: &[u8]) -> Cid {
        Cid(format!("cas1-{}", util::to_hex(&Sha256::digest(content))))
    }

    pub fn parse(s: &str) -> Result<Cid, RegistryError> {
        let hex = s
            .strip_prefix("cas1-")
            .ok_or_else(|| RegistryError::BadCid(s.to_string()))?;
        if !is_strict_hex(hex, 64) {
            return Err(RegistryError::BadCid(s.to_string()));
        }
        Ok(Cid(s.to_string()))
    }

    /// The cid for a raster whose content digest is already known.
    pub fn from_digest_hex(hex: &str) -> Result<Cid, RegistryError> {
        Cid::parse(&format!("cas1-{hex}"))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    fn hex(&self) -> &str {
        &self.0[5..]
    }
}

impl fmt::Display for Cid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Directory-backed store: `objects/<first 2 hex>/<cid>`.
pub struct Cas {
    root: PathBuf,
}

impl Cas {
    pub fn open(dir: impl AsRef<Path>) -> Result<Cas, RegistryError> {
        let root = dir.as_ref().to_path_buf();
        fs::create_dir_all(root.join("objects"))?;
        Ok(Cas { root })
    }

    fn object_path(&self, cid: &Cid) -> PathBuf {
        self.root.join("objects").join(&cid.hex()[..2]).join(cid.as_str())
    }

    /// Store content; idempotent, returns the content's cid.
    pub fn put(&self, content: &[u8]) -> Result<Cid, RegistryError> {
        let cid = Cid::from_bytes(content);
        let path = self.object_path(&cid);
        if path.exists() {
            return Ok(cid);
        }
        fs::create_dir_all(path.parent().expect("object path has parent"))?;
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, content)?;
        fs::rename(&tmp, &path)?;
        Ok(cid)
    }

    /// Fetch and verify content by cid.
    pub fn get(&self, cid: &Cid) -> Result<Vec<u8>, RegistryError> {
        let path = self.object_path(cid);
        if !path.exists() {
            return Err(RegistryError::CasNotFound(cid.to_string()));
        }
        let content = fs::read(&path)?;
        let actual = Cid::from_bytes(&content);
        if &actual != cid {
            return Err(RegistryError::CasCorrupt {
                cid: cid.to_string(),
                actual: actual.to_string(),
            });
        }
        Ok(content)
    }

    pub fn contains(&self, cid: &Cid) -> bool {
        self.object_path(cid).exists()
    }
}

//! Binary container: magic `CDB1`, little-endian integers, `f32` vectors.
//!
//! Layout (all strings are `u32` byte length + UTF-8):
//!
//! ```text
//! "CDB1" version:u32 dim:u32 max_name_words:u32
//! lemmatizer:u8 [n:u32 (form lemma)*]
//! n_words:u64 word*                         -- spell-check targets, sorted
//! n_concepts:u64 concept*
//!   cui sem_flag:u8 [sem] train_count:u64 n_names:u32
//!   (n_tokens:u32 token* abbrev:u8 votes:u32)*
//!   long_flag:u8 [f32 * dim] short_flag:u8 [f32 * dim]
//! cooc_mode:u8 n_pairs:u64 (cui_a cui_b count:u64)*
//! "END1"
//! ```
//!
//! The name index is rebuilt from the concept names on load.

use std::io::{self, Read, Write};

use super::{ConceptDatabase, ConceptRecord, NameKey};
use crate::cooc::{CoocMatrix, CoocMode};
use crate::error::{Error, Result};
use crate::normalize::{Lemmatizer, RuleLemmatizer};

const MAGIC: &[u8; 4] = b"CDB1";
const TRAILER: &[u8; 4] = b"END1";
const VERSION: u32 = 1;

impl ConceptDatabase {
    pub fn save<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = Writer(io::BufWriter::new(writer));
        w.bytes(MAGIC)?;
        w.u32(VERSION)?;
        w.u32(self.dim as u32)?;
        w.u32(self.max_name_words as u32)?;
        match &self.lemmatizer {
            Lemmatizer::Identity => w.u8(0)?,
            Lemmatizer::Rules(r) => {
                w.u8(1)?;
                let extra = r.extra_exceptions();
                w.u32(extra.len() as u32)?;
                for (form, lemma) in extra {
                    w.str(form)?;
                    w.str(lemma)?;
                }
            }
        }
        let mut words: Vec<&String> = self.words.iter().collect();
        words.sort_unstable();
        w.u64(words.len() as u64)?;
        for word in words {
            w.str(word)?;
        }
        w.u64(self.concepts.len() as u64)?;
        for c in &self.concepts {
            w.str(&c.cui)?;
            match &c.semantic_type {
                Some(s) => {
                    w.u8(1)?;
                    w.str(s)?;
                }
                None => w.u8(0)?,
            }
            w.u64(c.train_count)?;
            w.u32(c.names.len() as u32)?;
            for (name, votes) in c.names.iter().zip(&c.name_votes) {
                w.u32(name.tokens.len() as u32)?;
                for t in &name.tokens {
                    w.str(t)?;
                }
                w.u8(name.is_abbreviation as u8)?;
                w.u32(*votes)?;
            }
            for emb in [&c.embedding_long, &c.embedding_short] {
                match emb {
                    Some(v) => {
                        w.u8(1)?;
                        for x in v {
                            w.f32(*x as f32)?;
                        }
                    }
                    None => w.u8(0)?,
                }
            }
        }
        w.u8(match self.cooc.mode() {
            CoocMode::PerBlock => 0,
            CoocMode::PerOccurrence => 1,
        })?;
        let pairs = self.cooc.sorted_pairs();
        w.u64(pairs.len() as u64)?;
        for (a, b, n) in pairs {
            w.str(a)?;
            w.str(b)?;
            w.u64(n)?;
        }
        w.bytes(TRAILER)?;
        w.0.flush()?;
        Ok(())
    }

    /// Reads a container written by [`save`](Self::save). Any truncation or
    /// inconsistency is an error; no partial database is returned.
    pub fn load<R: Read>(reader: R) -> Result<Self> {
        let mut r = Reader(io::BufReader::new(reader));
        let mut magic = [0u8; 4];
        r.exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::Format("bad magic bytes".into()));
        }
        let version = r.u32()?;
        if version != VERSION {
            return Err(Error::Format(format!("unsupported version {version}")));
        }
        let dim = r.u32()? as usize;
        let max_name_words = r.u32()? as usize;
        let lemmatizer = match r.u8()? {
            0 => Lemmatizer::Identity,
            1 => {
                let n = r.u32()?;
                let mut pairs = Vec::new();
                for _ in 0..n {
                    pairs.push((r.str()?, r.str()?));
                }
                Lemmatizer::Rules(RuleLemmatizer::with_exceptions(pairs))
            }
            k => return Err(Error::Format(format!("unknown lemmatizer kind {k}"))),
        };
        let mut cdb = ConceptDatabase::new(lemmatizer).with_max_name_words(max_name_words);
        cdb.dim = dim;
        let n_words = r.u64()?;
        for _ in 0..n_words {
            let word = r.str()?;
            cdb.alphabet.extend(word.chars());
            cdb.words.insert(word);
        }
        cdb.alphabet.sort_unstable();
        cdb.alphabet.dedup();

        let n_concepts = r.u64()?;
        for _ in 0..n_concepts {
            let cui = r.str()?;
            if cdb.by_cui.contains_key(&cui) {
                return Err(Error::Format(format!("duplicate concept {cui}")));
            }
            let mut rec = ConceptRecord::new(&cui);
            if r.u8()? == 1 {
                rec.semantic_type = Some(r.str()?);
            }
            rec.train_count = r.u64()?;
            let n_names = r.u32()?;
            for _ in 0..n_names {
                let n_tokens = r.u32()?;
                if n_tokens == 0 {
                    return Err(Error::Format(format!("empty name for {cui}")));
                }
                let mut tokens = Vec::with_capacity(n_tokens as usize);
                for _ in 0..n_tokens {
                    tokens.push(r.str()?);
                }
                let is_abbreviation = r.u8()? == 1;
                let votes = r.u32()?;
                rec.names.push(NameKey {
                    tokens,
                    is_abbreviation,
                });
                rec.name_votes.push(votes);
            }
            if rec.names.is_empty() {
                return Err(Error::Format(format!("concept {cui} has no names")));
            }
            rec.embedding_long = r.embedding(dim)?;
            rec.embedding_short = r.embedding(dim)?;
            let idx = cdb.concepts.len() as u32;
            for name in &rec.names {
                cdb.index.insert(&name.tokens, idx, name.is_abbreviation);
            }
            cdb.by_cui.insert(cui, idx);
            cdb.concepts.push(rec);
        }
        let mode = match r.u8()? {
            0 => CoocMode::PerBlock,
            1 => CoocMode::PerOccurrence,
            k => return Err(Error::Format(format!("unknown co-occurrence mode {k}"))),
        };
        let mut cooc = CoocMatrix::new(mode);
        let n_pairs = r.u64()?;
        for _ in 0..n_pairs {
            let a = r.str()?;
            let b = r.str()?;
            let n = r.u64()?;
            cooc.add_pair(&a, &b, n);
        }
        cdb.cooc = cooc;
        let mut trailer = [0u8; 4];
        r.exact(&mut trailer)?;
        if &trailer != TRAILER {
            return Err(Error::Format("missing trailer".into()));
        }
        Ok(cdb)
    }
}

struct Writer<W: Write>(W);

impl<W: Write> Writer<W> {
    fn bytes(&mut self, b: &[u8]) -> io::Result<()> {
        self.0.write_all(b)
    }
    fn u8(&mut self, x: u8) -> io::Result<()> {
        self.bytes(&[x])
    }
    fn u32(&mut self, x: u32) -> io::Result<()> {
        self.bytes(&x.to_le_bytes())
    }
    fn u64(&mut self, x: u64) -> io::Result<()> {
        self.bytes(&x.to_le_bytes())
    }
    fn f32(&mut self, x: f32) -> io::Result<()> {
        self.bytes(&x.to_le_bytes())
    }
    fn str(&mut self, s: &str) -> io::Result<()> {
        self.u32(s.len() as u32)?;
        self.bytes(s.as_bytes())
    }
}

struct Reader<R: Read>(R);

impl<R: Read> Reader<R> {
    fn exact(&mut self, buf: &mut [u8]) -> Result<()> {
        self.0.read_exact(buf).map_err(|e| match e.kind() {
            io::ErrorKind::UnexpectedEof => Error::Format("truncated stream".into()),
            _ => Error::Io(e),
        })
    }
    fn u8(&mut self) -> Result<u8> {
        let mut b = [0u8; 1];
        self.exact(&mut b)?;
        Ok(b[0])
    }
    fn u32(&mut self) -> Result<u32> {
        let mut b = [0u8; 4];
        self.exact(&mut b)?;
        Ok(u32::from_le_bytes(b))
    }
    fn u64(&mut self) -> Result<u64> {
        let mut b = [0u8; 8];
        self.exact(&mut b)?;
        Ok(u64::from_le_bytes(b))
    }
    fn f32(&mut self) -> Result<f32> {
        let mut b = [0u8; 4];
        self.exact(&mut b)?;
        Ok(f32::from_le_bytes(b))
    }
    fn str(&mut self) -> Result<String> {
        let n = self.u32()? as usize;
        // guard against absurd lengths from corrupt input before allocating
        if n > 1 << 24 {
            return Err(Error::Format(format!("string length {n} out of range")));
        }
        let mut buf = vec![0u8; n];
        self.exact(&mut buf)?;
        String::from_utf8(buf).map_err(|_| Error::Format("invalid UTF-8".into()))
    }
    fn embedding(&mut self, dim: usize) -> Result<Option<Vec<f64>>> {
        match self.u8()? {
            0 => Ok(None),
            1 => {
                if dim == 0 {
                    return Err(Error::Format("embedding present with dimension 0".into()));
                }
                (0..dim).map(|_| self.f32().map(f64::from)).collect::<Result<_>>().map(Some)
            }
            k => Err(Error::Format(format!("bad embedding flag {k}"))),
        }
    }
}

//! On-disk store: archives, shop snapshot tables, index artifact and config.
//!
//! ```text
//! <root>/config.toml
//! <root>/archives/<name>.jsonl     ingested records, append-only
//! <root>/shops.sqlite              shops, snapshots, listings
//! <root>/index/current.npsidx      index artifact
//! ```

use std::fs::{self, File, OpenOptions};
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};

use chrono::{NaiveDate, Utc};
use npswatch_corpus::{Corpus, CorpusBuilder, ShopListing, ShopSnapshot};
use npswatch_ingest::{read_archive, write_archive, ArchiveRecord, Record};
use npswatch_textindex::{read_artifact, write_artifact, TermIndex};
use rusqlite::{params, Connection, ErrorCode};

use crate::error::read_file;
use crate::{Config, ForumConfig, ServiceError};

/// Environment variable overriding the store directory.
pub const STORE_ENV: &str = "NPSWATCH_STORE";

const SCHEMA: &str = "
PRAGMA foreign_keys = ON;
CREATE TABLE IF NOT EXISTS shops (
    id      INTEGER PRIMARY KEY,
    domain  TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS snapshots (
    id           INTEGER PRIMARY KEY AUTOINCREMENT,
    shop_id      INTEGER NOT NULL REFERENCES shops(id),
    captured_at  TEXT NOT NULL,
    UNIQUE (shop_id, captured_at)
);
CREATE TABLE IF NOT EXISTS listings (
    snapshot_id  INTEGER NOT NULL REFERENCES snapshots(id),
    position     INTEGER NOT NULL,
    name         TEXT NOT NULL,
    price        REAL,
    currency     TEXT,
    unit         TEXT,
    PRIMARY KEY (snapshot_id, position)
);
";

#[derive(Debug, Clone)]
pub struct Store {
    root: PathBuf,
}

impl Store {
    /// Opens the store at `root`, creating the layout and a default config
    /// when missing.
    pub fn open(root: impl Into<PathBuf>) -> Result<Self, ServiceError> {
        let store = Store { root: root.into() };
        fs::create_dir_all(store.archives_dir())?;
        fs::create_dir_all(store.root.join("index"))?;
        if !store.config_path().exists() {
            store.save_config(&Config::default())?;
        }
        store.shop_db()?;
        Ok(store)
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn config_path(&self) -> PathBuf {
        self.root.join("config.toml")
    }

    pub fn archives_dir(&self) -> PathBuf {
        self.root.join("archives")
    }

    pub fn index_path(&self) -> PathBuf {
        self.root.join("index").join("current.npsidx")
    }

    pub fn shop_db_path(&self) -> PathBuf {
        self.root.join("shops.sqlite")
    }

    /// Resolves a path from the config against the store root.
    pub fn resolve(&self, path: &Path) -> PathBuf {
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            self.root.join(path)
        }
    }

    pub fn config(&self) -> Result<Config, ServiceError> {
        Config::from_toml(&read_file(&self.config_path())?)
    }

    pub fn save_config(&self, config: &Config) -> Result<(), ServiceError> {
        atomic_write(&self.config_path(), |f| Ok(std::io::Write::write_all(f, config.to_toml().as_bytes())?))
    }

    /// Adds `forum` to the config unless a forum with its id exists.
    pub fn declare_forum(&self, forum: ForumConfig) -> Result<(), ServiceError> {
        let mut config = self.config()?;
        if config.forum(&forum.id).is_none() {
            config.forums.push(forum);
            self.save_config(&config)?;
        }
        Ok(())
    }

    /// Appends records to `archives/<name>.jsonl`.
    pub fn append_records(&self, name: &str, records: &[ArchiveRecord]) -> Result<usize, ServiceError> {
        if records.is_empty() {
            return Ok(0);
        }
        let path = self.archives_dir().join(format!("{name}.jsonl"));
        let file = OpenOptions::new().create(true).append(true).open(&path)?;
        Ok(write_archive(&mut BufWriter::new(file), records)?)
    }

    /// Every archived record, archives in file-name order.
    pub fn records(&self) -> Result<Vec<ArchiveRecord>, ServiceError> {
        let mut paths: Vec<PathBuf> = fs::read_dir(self.archives_dir())?
            .map(|e| e.map(|e| e.path()))
            .collect::<Result<_, _>>()?;
        paths.retain(|p| p.extension().is_some_and(|e| e == "jsonl"));
        paths.sort();
        let mut out = Vec::new();
        for p in paths {
            out.extend(read_archive(BufReader::new(File::open(&p)?))?);
        }
        Ok(out)
    }

    fn shop_db(&self) -> Result<Connection, ServiceError> {
        let conn = Connection::open(self.shop_db_path())?;
        conn.execute_batch(SCHEMA)?;
        Ok(conn)
    }

    /// Stores one capture of a shop. A second capture of the same shop on
    /// the same date is refused.
    pub fn insert_snapshot(&self, snapshot: &ShopSnapshot) -> Result<(), ServiceError> {
        let mut conn = self.shop_db()?;
        let tx = conn.transaction()?;
        tx.execute(
            "INSERT INTO shops (id, domain) VALUES (?1, ?2) ON CONFLICT(id) DO UPDATE SET domain = excluded.domain",
            params![snapshot.shop_id, snapshot.domain],
        )?;
        let inserted = tx.execute(
            "INSERT INTO snapshots (shop_id, captured_at) VALUES (?1, ?2)",
            params![snapshot.shop_id, snapshot.captured_at.to_string()],
        );
        match inserted {
            Err(rusqlite::Error::SqliteFailure(e, _)) if e.code == ErrorCode::ConstraintViolation => {
                return Err(ServiceError::DuplicateSnapshot {
                    shop_id: snapshot.shop_id,
                    captured_at: snapshot.captured_at,
                })
            }
            other => other?,
        };
        let snapshot_id = tx.last_insert_rowid();
        for (i, l) in snapshot.listings.iter().enumerate() {
            tx.execute(
                "INSERT INTO listings (snapshot_id, position, name, price, currency, unit) VALUES (?1, ?2, ?3, ?4, ?5, ?6)",
                params![snapshot_id, i as i64, l.name, l.price, l.currency, l.unit],
            )?;
        }
        tx.commit()?;
        Ok(())
    }

    pub fn has_snapshot(&self, shop_id: u32, captured_at: NaiveDate) -> Result<bool, ServiceError> {
        let conn = self.shop_db()?;
        let n: i64 = conn.query_row(
            "SELECT COUNT(*) FROM snapshots WHERE shop_id = ?1 AND captured_at = ?2",
            params![shop_id, captured_at.to_string()],
            |r| r.get(0),
        )?;
        Ok(n > 0)
    }

    /// All stored snapshots ordered by shop and date.
    pub fn snapshots(&self) -> Result<Vec<ShopSnapshot>, ServiceError> {
        let conn = self.shop_db()?;
        let mut heads = conn.prepare(
            "SELECT s.id, s.shop_id, sh.domain, s.captured_at FROM snapshots s JOIN shops sh ON sh.id = s.shop_id
             ORDER BY s.shop_id, s.captured_at",
        )?;
        let mut lines = conn
            .prepare("SELECT name, price, currency, unit FROM listings WHERE snapshot_id = ?1 ORDER BY position")?;
        let rows: Vec<(i64, u32, String, String)> =
            heads.query_map([], |r| Ok((r.get(0)?, r.get(1)?, r.get(2)?, r.get(3)?)))?.collect::<Result<_, _>>()?;
        let mut out = Vec::with_capacity(rows.len());
        for (id, shop_id, domain, captured_at) in rows {
            let captured_at = captured_at
                .parse()
                .map_err(|_| ServiceError::Config(format!("bad capture date {captured_at:?} in shop table")))?;
            let listings = lines
                .query_map([id], |r| {
                    Ok(ShopListing { name: r.get(0)?, price: r.get(1)?, currency: r.get(2)?, unit: r.get(3)? })
                })?
                .collect::<Result<_, _>>()?;
            out.push(ShopSnapshot { shop_id, domain, captured_at, listings });
        }
        Ok(out)
    }

    /// A builder holding the configured forums, every archived record and
    /// every shop snapshot.
    pub fn builder(&self) -> Result<CorpusBuilder, ServiceError> {
        let config = self.config()?;
        let mut b = CorpusBuilder::new();
        for f in &config.forums {
            b.add_forum(&f.id, &f.name, f.source.clone());
        }
        for r in self.records()? {
            r.apply(&mut b)?;
        }
        for s in self.snapshots()? {
            b.add_snapshot(s);
        }
        Ok(b)
    }

    pub fn corpus(&self) -> Result<Corpus, ServiceError> {
        Ok(self.builder()?.finish())
    }

    /// Writes the artifact to a temporary file next to the target and
    /// renames it into place, so readers see the old or the new file.
    pub fn write_index(&self, index: &TermIndex) -> Result<u64, ServiceError> {
        let path = self.index_path();
        atomic_write(&path, |f| Ok(write_artifact(index, BufWriter::new(f))?))?;
        Ok(fs::metadata(&path)?.len())
    }

    pub fn read_index(&self) -> Result<TermIndex, ServiceError> {
        let path = self.index_path();
        if !path.exists() {
            return Err(ServiceError::MissingIndex(path));
        }
        Ok(read_artifact(BufReader::new(File::open(path)?))?)
    }

    /// Seeds the store from an in-memory corpus: forums go to the config,
    /// records to `archives/<name>.jsonl`, snapshots to the shop tables.
    pub fn import_corpus(&self, name: &str, corpus: &Corpus) -> Result<(), ServiceError> {
        for f in &corpus.forums {
            self.declare_forum(ForumConfig { id: f.id.clone(), name: f.name.clone(), source: f.source.clone() })?;
        }
        let at = Utc::now();
        let records: Vec<ArchiveRecord> = corpus
            .forums
            .iter()
            .flat_map(|f| f.sections.iter().cloned().map(Record::Section))
            .chain(corpus.threads.iter().cloned().map(Record::Thread))
            .chain(corpus.users.iter().cloned().map(Record::User))
            .chain(corpus.posts.iter().cloned().map(Record::Post))
            .chain(corpus.tweets.iter().cloned().map(Record::Tweet))
            .map(|r| ArchiveRecord::new(r, at))
            .collect();
        self.append_records(name, &records)?;
        for s in &corpus.snapshots {
            self.insert_snapshot(s)?;
        }
        Ok(())
    }
}

fn atomic_write(
    path: &Path,
    write: impl FnOnce(&mut File) -> Result<(), ServiceError>,
) -> Result<(), ServiceError> {
    let dir = path.parent().unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    write(tmp.as_file_mut())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

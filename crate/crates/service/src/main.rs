use std::net::{IpAddr, SocketAddr};
use std::path::PathBuf;
use std::process::ExitCode;

use chrono::{DateTime, NaiveDate, Utc};
use clap::{Parser, Subcommand};
use npswatch_service::query::{self, Generation};
use npswatch_service::{build_index, ingest, serve, snapshot_shops, AppState, PageDir, ServiceError, Store, STORE_ENV};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "npswatch", version, about = "Monitor online discussion of new psychoactive substances")]
struct Cli {
    /// Store directory.
    #[arg(long, global = true, env = STORE_ENV, default_value = "npswatch-store")]
    store: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Extract records from page dumps or a stream file into the archives.
    Ingest {
        /// Adapter name, or `stream` for JSON Lines stream records.
        #[arg(long)]
        adapter: String,
        /// File or directory to read.
        #[arg(long)]
        input: PathBuf,
        /// Capture time used to resolve relative post dates (RFC 3339).
        #[arg(long)]
        captured_at: Option<DateTime<Utc>>,
    },
    /// Rebuild the term index from the store.
    Index,
    /// Capture every configured shop once.
    SnapshotShops {
        /// Directory of saved showcase pages, laid out as <host>/<path>.
        #[arg(long, conflicts_with = "live")]
        pages: Option<PathBuf>,
        /// Fetch showcases over the network.
        #[arg(long)]
        live: bool,
        /// Capture date; today when omitted.
        #[arg(long)]
        date: Option<NaiveDate>,
    },
    /// Run one analysis and print the JSON the API would return.
    Analyze {
        #[command(subcommand)]
        analysis: Analysis,
    },
    /// Serve the JSON API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        bind: IpAddr,
    },
}

#[derive(Debug, Subcommand)]
enum Analysis {
    Sources,
    Treemap(query::ForumParams),
    Trend(query::TrendParams),
    Horizon(query::HorizonParams),
    Cooccur(query::CooccurParams),
    Neologisms(query::NeologismParams),
    Geo(query::ForumParams),
    Distfit(query::DistfitParams),
    Substances(query::PageParams),
    Links,
}

fn print<T: Serialize>(value: &T) -> Result<(), Box<dyn std::error::Error>> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn analyze(g: &Generation, a: &Analysis) -> Result<(), Box<dyn std::error::Error>> {
    match a {
        Analysis::Sources => print(&query::sources(g)),
        Analysis::Treemap(p) => print(&query::forum_treemap(g, &p.forum)?),
        Analysis::Trend(p) => print(&query::term_trend(g, p)?),
        Analysis::Horizon(p) => print(&query::term_horizon(g, p)?),
        Analysis::Cooccur(p) => print(&query::cooccur(g, p)?),
        Analysis::Neologisms(p) => print(&query::term_neologisms(g, p)?),
        Analysis::Geo(p) => print(&query::geo(g, p)?),
        Analysis::Distfit(p) => print(&query::distfit(g, p)?),
        Analysis::Substances(p) => print(&query::substances(g, p)),
        Analysis::Links => print(&query::links(g)),
    }
}

#[cfg(feature = "live-fetch")]
async fn snapshot_live(store: &Store, date: NaiveDate) -> Result<npswatch_service::SnapshotReport, ServiceError> {
    snapshot_shops(store, &npswatch_ingest::HttpFetcher::default(), date).await
}

#[cfg(not(feature = "live-fetch"))]
async fn snapshot_live(_: &Store, _: NaiveDate) -> Result<npswatch_service::SnapshotReport, ServiceError> {
    Err(ServiceError::Config("live fetching needs the `live-fetch` feature".into()))
}

fn run(cli: Cli) -> Result<(), Box<dyn std::error::Error>> {
    let store = Store::open(&cli.store)?;
    let runtime = || tokio::runtime::Builder::new_multi_thread().enable_all().build();
    match cli.command {
        Command::Ingest { adapter, input, captured_at } => {
            print(&ingest(&store, &adapter, &input, captured_at.unwrap_or_else(Utc::now))?)
        }
        Command::Index => print(&build_index(&store)?),
        Command::SnapshotShops { pages, live, date } => {
            let date = date.unwrap_or_else(|| Utc::now().date_naive());
            let report = runtime()?.block_on(async {
                match (pages, live) {
                    (Some(dir), false) => snapshot_shops(&store, &PageDir::new(dir), date).await,
                    (None, true) => snapshot_live(&store, date).await,
                    _ => Err(ServiceError::Config("give either --pages DIR or --live".into())),
                }
            })?;
            print(&report)
        }
        Command::Analyze { analysis } => analyze(&Generation::load(&store)?, &analysis),
        Command::Serve { port, bind } => {
            let state = AppState::from_store(store)?;
            Ok(runtime()?.block_on(serve(state, SocketAddr::new(bind, port)))?)
        }
    }
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()))
        .with_writer(std::io::stderr)
        .init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

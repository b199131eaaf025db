//! HTTP front end for the assessment store and rating engine.
//!
//! All bodies use the same canonical JSON as the files on disk. Errors come
//! back as [`ApiError`] with a status derived from the error code.

mod error;
mod routes;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use llmrisk_core::{load_catalog, Catalog, CatalogSource, DocumentStore, RatingScheme};
use tokio::net::TcpListener;

pub use error::{status_for, ApiError};
pub use routes::{router, EvaluateRequest, StatusRequest};

pub const DEFAULT_ADDR: &str = "127.0.0.1:8080";

#[derive(Clone, Debug)]
pub struct ServerConfig {
    pub addr: SocketAddr,
    pub store_root: PathBuf,
    /// Falls back to the bundled scheme.
    pub scheme_path: Option<PathBuf>,
    /// Falls back to the bundled catalog.
    pub catalog_path: Option<PathBuf>,
}

impl ServerConfig {
    pub fn new(store_root: impl Into<PathBuf>) -> Self {
        ServerConfig {
            addr: DEFAULT_ADDR.parse().expect("valid default address"),
            store_root: store_root.into(),
            scheme_path: None,
            catalog_path: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct AppState {
    pub store: Arc<DocumentStore>,
    pub scheme: Arc<RatingScheme>,
    pub catalog: Arc<Catalog>,
}

impl AppState {
    pub fn new(store: DocumentStore, scheme: RatingScheme, catalog: Catalog) -> Self {
        AppState {
            store: Arc::new(store),
            scheme: Arc::new(scheme),
            catalog: Arc::new(catalog),
        }
    }

    pub fn from_config(config: &ServerConfig) -> llmrisk_core::Result<Self> {
        let scheme = match &config.scheme_path {
            Some(path) => RatingScheme::load(path)?,
            None => RatingScheme::bundled(),
        };
        let catalog = match &config.catalog_path {
            Some(path) => load_catalog(CatalogSource::File(path.clone()))?,
            None => Catalog::bundled(),
        };
        let store = DocumentStore::open(&config.store_root)?;
        Ok(AppState::new(store, scheme, catalog))
    }
}

/// Binds `addr` and serves in the background. Returns the bound address,
/// which is useful when `addr` asks for port 0.
pub async fn spawn(
    state: AppState,
    addr: SocketAddr,
) -> std::io::Result<(SocketAddr, tokio::task::JoinHandle<std::io::Result<()>>)> {
    let listener = TcpListener::bind(addr).await?;
    let local = listener.local_addr()?;
    let app = router(state);
    let handle = tokio::spawn(async move { axum::serve(listener, app).await });
    Ok((local, handle))
}

/// Runs the service until ctrl-c.
pub async fn serve(config: ServerConfig) -> Result<(), Box<dyn std::error::Error + Send + Sync>> {
    let state = AppState::from_config(&config)?;
    let listener = TcpListener::bind(config.addr).await?;
    tracing::info!(addr = %listener.local_addr()?, store = %config.store_root.display(), "listening");
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}

use tokio::net::TcpListener;

use w6h_server::{AppState, ServerConfig};

use crate::failure::Failure;
use crate::{io, ServeArgs};

pub fn run(args: ServeArgs) -> Result<u8, Failure> {
    let mut config = ServerConfig::new(
        io::load_matrix(args.source.matrix.as_deref())?,
        io::load_graph(args.graph.graph.as_deref())?,
    );
    config.data_dir = args.data_dir;
    config.assets = args.assets;
    let state = AppState::new(config)?;

    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async move {
        let addr = format!("{}:{}", args.host, args.port);
        let listener = TcpListener::bind(&addr)
            .await
            .map_err(|e| Failure::usage(format!("cannot bind {addr}: {e}")))?;
        println!("listening on http://{}", listener.local_addr()?);
        w6h_server::serve(listener, state, shutdown_signal()).await?;
        println!("shut down");
        Ok(0)
    })
}

async fn shutdown_signal() {
    let interrupt = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    #[cfg(unix)]
    {
        let terminate = async {
            match tokio::signal::unix::signal(tokio::signal::unix::SignalKind::terminate()) {
                Ok(mut s) => {
                    s.recv().await;
                }
                Err(_) => std::future::pending().await,
            }
        };
        tokio::select! {
            _ = interrupt => {}
            _ = terminate => {}
        }
    }
    #[cfg(not(unix))]
    interrupt.await;
}

//! Websocket front for [`Session`]: one session per connection.

use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::response::Response;
use axum::routing::get;
use axum::Router;
use tokio::net::TcpListener;

use crate::wire::{error_frame, Session};

/// Routes `/` and `/ws` to the session handler.
pub fn router() -> Router {
    Router::new().route("/", get(upgrade)).route("/ws", get(upgrade))
}

async fn upgrade(ws: WebSocketUpgrade) -> Response {
    ws.on_upgrade(run_session)
}

/// Messages are handled one at a time, off the async workers since a trace
/// can take a while.
async fn run_session(mut socket: WebSocket) {
    let mut session = Session::new();
    while let Some(Ok(msg)) = socket.recv().await {
        let text = match msg {
            Message::Text(t) => t.to_string(),
            Message::Binary(b) => match String::from_utf8(b.to_vec()) {
                Ok(t) => t,
                Err(_) => {
                    let reply = error_frame("message is not UTF-8", None).to_string();
                    if socket.send(Message::Text(reply.into())).await.is_err() {
                        break;
                    }
                    continue;
                }
            },
            Message::Close(_) => break,
            _ => continue,
        };
        let joined = tokio::task::spawn_blocking(move || {
            let reply = session.handle_text(&text);
            (session, reply)
        })
        .await;
        let Ok((s, reply)) = joined else { break };
        session = s;
        if socket.send(Message::Text(reply.to_string().into())).await.is_err() {
            break;
        }
    }
}

/// Serves until `shutdown` resolves.
pub async fn serve(
    listener: TcpListener,
    shutdown: impl std::future::Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    axum::serve(listener, router()).with_graceful_shutdown(shutdown).await
}

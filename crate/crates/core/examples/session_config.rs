//! Loading a JSON session configuration and running the CLI commands as
//! library calls.

use kmhecke::cli::{cmd_show, cmd_verdict, selftest, Session, SessionConfig};

const CONFIG: &str = include_str!("f1.json");

fn main() -> kmhecke::Result<()> {
    let sess = Session::load(SessionConfig::from_json(CONFIG)?)?;
    println!("{}", serde_json::to_string_pretty(&cmd_show(&sess)?).expect("json"));
    for name in sess.characters.keys() {
        println!("{name}: {}", cmd_verdict(&sess, name)?["status"]);
    }
    let (ok, _) = selftest(&sess, true)?;
    println!("quick selftest passed: {ok}");
    Ok(())
}

use std::io;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("LATSPEC_LOG", "warn"))
        .init();
    let code = latspec::run(
        std::env::args_os(),
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    );
    std::process::exit(code);
}

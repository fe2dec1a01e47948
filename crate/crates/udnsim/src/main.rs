fn main() {
    // default to info so per-density progress shows up on stderr;
    // RUST_LOG still overrides
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    std::process::exit(udnsim::cli::run(std::env::args_os()));
}

fn main() {
    std::process::exit(dqsync_cli::run(std::env::args_os()));
}

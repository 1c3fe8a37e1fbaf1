fn main() {
    std::process::exit(spotspray_cli::run_cli(std::env::args_os()));
}

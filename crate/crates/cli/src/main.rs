fn main() {
    std::process::exit(ruqlp_cli::dispatch(std::env::args_os()));
}

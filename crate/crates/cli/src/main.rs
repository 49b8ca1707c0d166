fn main() {
    std::process::exit(xyzchain_cli::run(std::env::args_os()));
}

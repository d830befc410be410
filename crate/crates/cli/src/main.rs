fn main() {
    std::process::exit(dwindex_cli::run(std::env::args_os()));
}

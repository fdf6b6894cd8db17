fn main() {
    std::process::exit(spheromesh::cli::run_cli(std::env::args_os()));
}

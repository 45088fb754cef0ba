fn main() {
    std::process::exit(ncp::cli_io::cli::main_with_env());
}

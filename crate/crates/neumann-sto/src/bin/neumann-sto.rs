fn main() {
    std::process::exit(neumann_sto::cli::main_from_args());
}

fn main() {
    std::process::exit(cdqa::cli::main());
}

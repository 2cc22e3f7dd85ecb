fn main() {
    std::process::exit(specht_cli::main_from_env());
}

fn main() {
    std::process::exit(qrotor::cli::main_from_env());
}

fn main() {
    std::process::exit(forest_kernel::cli::main());
}

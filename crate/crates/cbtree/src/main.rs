fn main() {
    std::process::exit(cbtree::cli::run());
}

# Sources package

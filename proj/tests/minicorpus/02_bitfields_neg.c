struct T { int a; };
int f(int c)
{
    return c ? 1 : 3;
}
